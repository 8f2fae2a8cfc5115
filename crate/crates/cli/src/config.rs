//! JSON run configuration.
//!
//! ```json
//! {
//!   "n": 100, "epsilon": 0.001, "tau": 0.1,
//!   "curve": { "family": "ms_exponential", "i": 1.05 },
//!   "seed": 7,
//!   "init": { "mode": "uniform", "low": 0.0, "high": 1.0 },
//!   "strobe": { "ref": 0, "frames": 500 },
//!   "tolerances": { "time": 1e-9, "phase": 1e-12, "cluster": 1e-6 },
//!   "output": { "format": "csv", "path": "frames.csv" },
//!   "strict": false
//! }
//! ```
//!
//! Exactly one of `horizon` and `strobe` is required. Optional sections:
//! `tolerances`, `output`, `strict`, `settle_window` and `returnmap`
//! (`theta0`, `p`, `q`, `steps`, `sample_every`).

use std::path::PathBuf;

use pulsecouple_core::analysis::DEFAULT_CLUSTER_TOL;
use pulsecouple_core::engine::{DEFAULT_TOL_PHASE, DEFAULT_TOL_TIME};
use pulsecouple_core::{validate_assumptions, AssumptionReport, CouplingParams, CurveSpec, ModelParams};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
#[error("config error at `{path}`: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn at(path: &str, message: impl Into<String>) -> Self {
        ConfigError { path: path.to_string(), message: message.into() }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n: usize,
    epsilon: f64,
    tau: f64,
    curve: RawCurve,
    seed: u64,
    init: RawInit,
    horizon: Option<f64>,
    strobe: Option<RawStrobe>,
    #[serde(default)]
    tolerances: RawTolerances,
    output: Option<RawOutput>,
    #[serde(default)]
    strict: bool,
    settle_window: Option<usize>,
    returnmap: Option<ReturnMapSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurve {
    family: String,
    i: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
enum RawInit {
    Uniform { low: f64, high: f64 },
    Explicit { phases: Vec<f64> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStrobe {
    #[serde(rename = "ref")]
    reference: usize,
    frames: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    #[serde(default = "default_tol_time")]
    time: f64,
    #[serde(default = "default_tol_phase")]
    phase: f64,
    #[serde(default = "default_cluster_tol")]
    cluster: f64,
}

impl Default for RawTolerances {
    fn default() -> Self {
        RawTolerances {
            time: DEFAULT_TOL_TIME,
            phase: DEFAULT_TOL_PHASE,
            cluster: DEFAULT_CLUSTER_TOL,
        }
    }
}

fn default_tol_time() -> f64 {
    DEFAULT_TOL_TIME
}
fn default_tol_phase() -> f64 {
    DEFAULT_TOL_PHASE
}
fn default_cluster_tol() -> f64 {
    DEFAULT_CLUSTER_TOL
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    format: OutputFormat,
    path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Svg,
}

/// Where the command's artifact goes; stdout when `path` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub format: OutputFormat,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitSpec {
    /// Independent draws on `(low, high]`.
    Uniform { low: f64, high: f64 },
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunMode {
    Horizon(f64),
    Strobe { reference: usize, frames: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReturnMapSpec {
    pub theta0: f64,
    pub p: usize,
    pub q: usize,
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// Compare against the engine every this many steps (0 disables).
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
}

fn default_steps() -> usize {
    10_000
}
fn default_sample_every() -> usize {
    100
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub seed: u64,
    pub init: InitSpec,
    pub mode: RunMode,
    pub cluster_tol: f64,
    pub output: OutputSpec,
    pub strict: bool,
    /// Frames over which the cluster count must be unchanged to count as settled.
    pub settle_window: usize,
    pub returnmap: Option<ReturnMapSpec>,
    pub assumptions: AssumptionReport,
}

pub const DEFAULT_SETTLE_WINDOW: usize = 50;

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ConfigError { path, message: e.into_inner().to_string() }
    })?;
    raw.validate()
}

impl RawConfig {
    fn validate(self) -> Result<RunConfig, ConfigError> {
        if self.curve.family != "ms_exponential" {
            return Err(ConfigError::at(
                "curve.family",
                format!("unknown curve family {:?}; expected \"ms_exponential\"", self.curve.family),
            ));
        }
        let curve = CurveSpec::exponential(self.curve.i).map_err(|e| ConfigError::at("curve.i", e.to_string()))?;
        let coupling = CouplingParams::new(self.n, self.epsilon, self.tau).map_err(|e| {
            let field = match e {
                pulsecouple_core::Error::InvalidParameter { name, .. } => name,
                _ => "n",
            };
            ConfigError::at(field, e.to_string())
        })?;
        let params = ModelParams::with_tolerances(curve, coupling, self.tolerances.time, self.tolerances.phase)
            .map_err(|e| {
                let field = match e {
                    pulsecouple_core::Error::InvalidParameter { name: "tol_phase", .. } => "tolerances.phase",
                    _ => "tolerances.time",
                };
                ConfigError::at(field, e.to_string())
            })?;
        if !(self.tolerances.cluster >= 0.0 && self.tolerances.cluster.is_finite()) {
            return Err(ConfigError::at("tolerances.cluster", "must be finite and non-negative"));
        }

        let init = match self.init {
            RawInit::Uniform { low, high } => {
                if !(0.0 <= low && low < high && high <= 1.0) {
                    return Err(ConfigError::at("init", "uniform range (low, high] must satisfy 0 <= low < high <= 1"));
                }
                InitSpec::Uniform { low, high }
            }
            RawInit::Explicit { phases } => {
                if phases.len() != self.n {
                    return Err(ConfigError::at(
                        "init.phases",
                        format!("expected {} phases, found {}", self.n, phases.len()),
                    ));
                }
                if let Some((k, v)) = phases.iter().enumerate().find(|(_, &p)| !(p > 0.0 && p <= 1.0)) {
                    return Err(ConfigError::at(&format!("init.phases[{k}]"), format!("{v} is not in (0, 1]")));
                }
                InitSpec::Explicit(phases)
            }
        };

        let mode = match (self.horizon, self.strobe) {
            (Some(_), Some(_)) => return Err(ConfigError::at("horizon", "give either `horizon` or `strobe`, not both")),
            (None, None) => return Err(ConfigError::at("horizon", "one of `horizon` or `strobe` is required")),
            (Some(h), None) => {
                if !(h > 0.0 && h.is_finite()) {
                    return Err(ConfigError::at("horizon", "must be finite and positive"));
                }
                RunMode::Horizon(h)
            }
            (None, Some(s)) => {
                if s.reference >= self.n {
                    return Err(ConfigError::at("strobe.ref", format!("must be below n = {}", self.n)));
                }
                if s.frames == 0 {
                    return Err(ConfigError::at("strobe.frames", "must be at least 1"));
                }
                RunMode::Strobe { reference: s.reference, frames: s.frames }
            }
        };

        if let Some(rm) = &self.returnmap {
            if rm.p == 0 || rm.q == 0 || rm.p + rm.q != self.n {
                return Err(ConfigError::at("returnmap.p", "need p, q >= 1 and p + q = n"));
            }
        }

        let assumptions = validate_assumptions(&curve, &coupling).map_err(|e| ConfigError::at("tau", e.to_string()))?;
        let output = match self.output {
            Some(o) => OutputSpec { format: o.format, path: o.path },
            None => OutputSpec { format: OutputFormat::Csv, path: None },
        };
        Ok(RunConfig {
            params,
            seed: self.seed,
            init,
            mode,
            cluster_tol: self.tolerances.cluster,
            output,
            strict: self.strict,
            settle_window: self.settle_window.unwrap_or(DEFAULT_SETTLE_WINDOW),
            returnmap: self.returnmap,
            assumptions,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIM1: &str = r#"{
        "n": 100, "epsilon": 0.001, "tau": 0.1,
        "curve": {"family": "ms_exponential", "i": 1.05},
        "seed": 1,
        "init": {"mode": "uniform", "low": 0.0, "high": 0.01},
        "strobe": {"ref": 0, "frames": 500}
    }"#;

    fn with(field: &str, replacement: &str) -> String {
        let mut v: serde_json::Value = serde_json::from_str(SIM1).unwrap();
        let obj = v.as_object_mut().unwrap();
        if replacement.is_empty() {
            obj.remove(field);
        } else {
            obj.insert(field.to_string(), serde_json::from_str(replacement).unwrap());
        }
        v.to_string()
    }

    #[test]
    fn default_configuration() {
        let c = parse_config(SIM1).unwrap();
        assert!((c.assumptions.a2_value - 0.5789).abs() < 1e-4);
        assert!(c.assumptions.a2_holds);
        assert_eq!(c.init, InitSpec::Uniform { low: 0.0, high: 0.01 });
        assert_eq!(c.mode, RunMode::Strobe { reference: 0, frames: 500 });
        assert_eq!(c.params.tol_time, 1e-9);
        assert_eq!(c.params.tol_phase, 1e-12);
        assert_eq!(c.cluster_tol, 1e-6);
        assert_eq!(c.settle_window, 50);
        assert!(!c.strict);
    }

    #[test]
    fn missing_field_is_named() {
        let err = parse_config(&with("tau", "")).unwrap_err();
        assert!(err.message.contains("tau"), "{err}");
    }

    #[test]
    fn nested_errors_carry_paths() {
        let err = parse_config(&with("curve", r#"{"family": "ms_exponential", "i": "x"}"#)).unwrap_err();
        assert_eq!(err.path, "curve.i");
        let err = parse_config(&with("curve", r#"{"family": "ms_exponential", "i": 0.9}"#)).unwrap_err();
        assert_eq!(err.path, "curve.i");
        let err = parse_config(&with("curve", r#"{"family": "linear", "i": 1.05}"#)).unwrap_err();
        assert_eq!(err.path, "curve.family");
    }

    #[test]
    fn range_errors() {
        assert_eq!(parse_config(&with("tau", "0")).unwrap_err().path, "tau");
        assert_eq!(parse_config(&with("n", "1")).unwrap_err().path, "n");
        assert_eq!(parse_config(&with("epsilon", "-1")).unwrap_err().path, "epsilon");
        let bad_range = with("init", r#"{"mode": "uniform", "low": 0.5, "high": 1.5}"#);
        assert_eq!(parse_config(&bad_range).unwrap_err().path, "init");
        let mut explicit = vec![0.5; 100];
        explicit[4] = 0.0;
        let bad_phase = with("init", &format!(r#"{{"mode": "explicit", "phases": {explicit:?}}}"#));
        assert_eq!(parse_config(&bad_phase).unwrap_err().path, "init.phases[4]");
        let short = with("init", r#"{"mode": "explicit", "phases": [0.5]}"#);
        assert_eq!(parse_config(&short).unwrap_err().path, "init.phases");
    }

    #[test]
    fn run_mode_is_exclusive() {
        let both = with("horizon", "10");
        assert!(parse_config(&both).is_err());
        let neither = with("strobe", "");
        assert!(parse_config(&neither).is_err());
        let horizon_only = {
            let mut v: serde_json::Value = serde_json::from_str(&neither).unwrap();
            v["horizon"] = serde_json::json!(25.0);
            v.to_string()
        };
        assert_eq!(parse_config(&horizon_only).unwrap().mode, RunMode::Horizon(25.0));
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(parse_config(&with("colour", "\"red\"")).is_err());
    }

    #[test]
    fn tolerance_overrides() {
        let c = parse_config(&with("tolerances", r#"{"time": 1e-10, "cluster": 1e-3}"#)).unwrap();
        assert_eq!(c.params.tol_time, 1e-10);
        assert_eq!(c.params.tol_phase, 1e-12);
        assert_eq!(c.cluster_tol, 1e-3);
        let err = parse_config(&with("tolerances", r#"{"time": 0.01}"#)).unwrap_err();
        assert_eq!(err.path, "tolerances.time");
    }

    #[test]
    fn assumption_violation_still_parses() {
        let c = parse_config(&with("epsilon", "0.01")).unwrap();
        assert!(!c.assumptions.a2_holds);
    }
}
