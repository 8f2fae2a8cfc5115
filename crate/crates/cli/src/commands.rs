//! Subcommand implementations. Each returns a JSON-serializable summary or
//! a [`CliError`] carrying the process exit code.

use std::collections::{BTreeMap, VecDeque};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use pulsecouple_core::analysis::{
    cluster_partition, fig3_construct, frame_cluster_count, is_completely_synchronized, iterate_return_map, run_trial,
    summarize, two_clique_oracle_step, AuditReport, DesyncSummary, RunAuditor, StroboscopicFrame, Tolerances,
    TwoCliqueState,
};
use pulsecouple_core::{validate_assumptions, CouplingParams, ModelParams, NetworkState};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ConfigError, OutputFormat, RunConfig, RunMode};
use crate::output;
use crate::sampling::initial_phases;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("f(2 tau) + N epsilon = {0:.6} is not below 1 (strict mode)")]
    StrictAssumption(f64),
    #[error("infeasible scenario: {0}")]
    Infeasible(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("numerical failure: {0}")]
    Numerical(#[from] pulsecouple_core::Error),
    #[error("audit failed: min inter-firing gap {gap}, max pulses in flight per source {pipeline}")]
    Audit { gap: f64, pipeline: usize, summary: Box<RunSummary> },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Usage(_) | CliError::Infeasible(_) => 1,
            CliError::StrictAssumption(_) => 2,
            CliError::Io { .. } | CliError::Numerical(_) => 3,
            CliError::Audit { .. } => 4,
        }
    }
}

fn io_err(path: &Option<PathBuf>) -> impl Fn(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.as_deref().map_or_else(|| "<stdout>".into(), |p| p.display().to_string()),
        source,
    }
}

/// Result of one configured run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub sync_ever: bool,
    pub sync_time: Option<f64>,
    pub frames_emitted: usize,
    pub cluster_count_final: usize,
    /// Cluster count if unchanged over the settle window of frames.
    pub settled_cluster_count: Option<usize>,
    /// `None` when no oscillator fired twice.
    pub min_interfire_gap: Option<f64>,
    pub refractory_ok: bool,
    pub max_pipeline_per_source: usize,
    pub single_pulse_ok: bool,
    pub a2_value: f64,
    pub a2_holds: bool,
    pub end_time: f64,
    pub terminal_spread: f64,
}

impl RunSummary {
    pub fn audits_pass(&self) -> bool {
        self.refractory_ok && self.single_pulse_ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateReport {
    pub n: usize,
    pub epsilon: f64,
    pub tau: f64,
    pub dissipation: f64,
    pub a2_value: f64,
    pub a2_holds: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchReport {
    pub trials: usize,
    pub sync_detected_count: usize,
    pub min_spread: f64,
    pub median_spread: f64,
    pub cluster_histogram: BTreeMap<usize, usize>,
    pub audits_ok: usize,
    pub a2_value: f64,
}

impl BatchReport {
    fn new(s: DesyncSummary, a2_value: f64) -> Self {
        BatchReport {
            trials: s.trials,
            sync_detected_count: s.sync_detected_count,
            min_spread: s.min_spread,
            median_spread: s.median_spread,
            cluster_histogram: s.cluster_histogram,
            audits_ok: s.audits_ok,
            a2_value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitReport {
    pub steps: usize,
    pub min_theta: f64,
    pub reached_zero: bool,
    pub sampled: usize,
    pub max_oracle_delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig3Report {
    pub phi: f64,
    /// Largest phase difference seen on `[tau, tau + phi)`.
    pub max_spread_on_window: f64,
    pub detector_synchronized_on_window: bool,
    pub spread_after: f64,
}

/// Applies the strict gate, or warns on stderr, for a parameter set.
pub fn check_assumptions(config: &RunConfig, params: &ModelParams, strict: bool) -> Result<f64, CliError> {
    let report = validate_assumptions(&params.curve, &params.coupling)?;
    if !report.a2_holds {
        if strict || config.strict {
            return Err(CliError::StrictAssumption(report.a2_value));
        }
        eprintln!(
            "warning: f(2 tau) + N epsilon = {:.6} is not below 1; lemma audits are not guaranteed",
            report.a2_value
        );
    }
    Ok(report.a2_value)
}

pub fn validate(config: &RunConfig, strict: bool) -> Result<ValidateReport, CliError> {
    let p = &config.params;
    check_assumptions(config, p, strict)?;
    Ok(ValidateReport {
        n: p.n(),
        epsilon: p.epsilon(),
        tau: p.tau(),
        dissipation: p.curve.dissipation(),
        a2_value: config.assumptions.a2_value,
        a2_holds: config.assumptions.a2_holds,
        margin: config.assumptions.margin,
    })
}

fn spread(phases: &[f64]) -> f64 {
    let (lo, hi) = phases
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| (lo.min(p), hi.max(p)));
    hi - lo
}

/// Runs the configured mode once, auditing every event and passing each
/// stroboscopic frame to `on_frame`.
pub fn run_once(
    config: &RunConfig,
    a2_value: f64,
    mut on_frame: impl FnMut(&StroboscopicFrame) -> Result<(), CliError>,
) -> Result<RunSummary, CliError> {
    let params = config.params;
    let phases = initial_phases(&config.init, params.n(), config.seed, 0);
    let mut state = NetworkState::new(params, &phases)?;
    let tol = Tolerances::from(&params);
    let mut auditor = RunAuditor::new(&params);
    let mut sync_time = is_completely_synchronized(&state, tol).synchronized.then_some(0.0);
    let mut observe = |state: &NetworkState, t: f64| {
        if sync_time.is_none() && spread(state.phases()) <= tol.phase && is_completely_synchronized(state, tol).synchronized {
            sync_time = Some(t);
        }
    };

    let mut frames_emitted = 0;
    let mut recent_counts = VecDeque::with_capacity(config.settle_window + 1);
    let cluster_count_final;
    match config.mode {
        RunMode::Horizon(horizon) => {
            while state.next_event_time()? <= horizon {
                let report = state.step()?;
                auditor.observe(&report);
                observe(&state, report.event_time);
            }
            state.run_until_time(horizon)?;
            cluster_count_final = cluster_partition(&state, Tolerances::uniform(config.cluster_tol)).len();
        }
        RunMode::Strobe { reference, frames } => {
            let mut last_count = 0;
            while frames_emitted < frames {
                let report = state.step()?;
                auditor.observe(&report);
                observe(&state, report.event_time);
                if report.fired.binary_search(&reference).is_err() {
                    continue;
                }
                let mut phases = state.phases().to_vec();
                for &i in &report.fired {
                    phases[i] = 1.0;
                }
                let frame = StroboscopicFrame { k: state.fire_log(reference).total(), t_k: report.event_time, phases };
                last_count = frame_cluster_count(&frame.phases, config.cluster_tol);
                recent_counts.push_back(last_count);
                if recent_counts.len() > config.settle_window {
                    recent_counts.pop_front();
                }
                on_frame(&frame)?;
                frames_emitted += 1;
            }
            cluster_count_final = last_count;
        }
    }

    let settled_cluster_count = (config.settle_window > 0
        && recent_counts.len() == config.settle_window
        && recent_counts.iter().all(|&c| c == recent_counts[0]))
    .then(|| recent_counts[0]);
    let audit: AuditReport = auditor.finish();
    Ok(RunSummary {
        sync_ever: sync_time.is_some(),
        sync_time,
        frames_emitted,
        cluster_count_final,
        settled_cluster_count,
        min_interfire_gap: audit.min_interfire_gap.is_finite().then_some(audit.min_interfire_gap),
        refractory_ok: audit.lemma1_ok,
        max_pipeline_per_source: audit.max_pipeline_per_source,
        single_pulse_ok: audit.lemma2_ok,
        a2_value,
        a2_holds: config.assumptions.a2_holds,
        end_time: state.now(),
        terminal_spread: spread(state.phases()),
    })
}

pub fn simulate(config: &RunConfig, strict: bool) -> Result<RunSummary, CliError> {
    let a2 = check_assumptions(config, &config.params, strict)?;
    run_once(config, a2, |_| Ok(()))
}

/// `trials` independent horizon runs, trial `k` drawing from RNG stream `k`.
/// Runs execute in parallel; results are merged in trial order.
pub fn simulate_batch(config: &RunConfig, trials: usize, strict: bool) -> Result<BatchReport, CliError> {
    let a2 = check_assumptions(config, &config.params, strict)?;
    let RunMode::Horizon(horizon) = config.mode else {
        return Err(CliError::Usage("--trials needs a `horizon` run, not `strobe`".into()));
    };
    let params = config.params;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|k| {
            let phases = initial_phases(&config.init, params.n(), config.seed, k as u64);
            run_trial(&params, &phases, horizon, config.cluster_tol)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BatchReport::new(summarize(&outcomes), a2))
}

enum Sink {
    Stdout(io::StdoutLock<'static>),
    File(BufWriter<File>),
}

impl Write for Sink {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self {
            Sink::Stdout(s) => s.write(buf),
            Sink::File(f) => f.write(buf),
        }
    }
    fn flush(&mut self) -> io::Result<()> {
        match self {
            Sink::Stdout(s) => s.flush(),
            Sink::File(f) => f.flush(),
        }
    }
}

fn open_sink(path: &Option<PathBuf>) -> Result<Sink, CliError> {
    match path {
        None => Ok(Sink::Stdout(io::stdout().lock())),
        Some(p) => File::create(p)
            .map(|f| Sink::File(BufWriter::new(f)))
            .map_err(io_err(path)),
    }
}

/// Writes the stroboscopic frames to the configured output.
pub fn strobe(config: &RunConfig, strict: bool) -> Result<RunSummary, CliError> {
    let RunMode::Strobe { .. } = config.mode else {
        return Err(CliError::Usage("`strobe` needs a `strobe` section in the config".into()));
    };
    let a2 = check_assumptions(config, &config.params, strict)?;
    let path = &config.output.path;
    let mut sink = open_sink(path)?;
    let summary = match config.output.format {
        OutputFormat::Csv => {
            output::strobe_header(&mut sink, config.params.n()).map_err(io_err(path))?;
            run_once(config, a2, |f| output::strobe_row(&mut sink, f).map_err(io_err(path)))?
        }
        OutputFormat::Svg => {
            let mut frames = Vec::new();
            let summary = run_once(config, a2, |f| {
                frames.push(f.clone());
                Ok(())
            })?;
            output::strobe_svg(&mut sink, &frames).map_err(io_err(path))?;
            summary
        }
    };
    sink.flush().map_err(io_err(path))?;
    Ok(summary)
}

pub fn audit(config: &RunConfig, strict: bool) -> Result<RunSummary, CliError> {
    let summary = simulate(config, strict)?;
    if !summary.audits_pass() {
        return Err(CliError::Audit {
            gap: summary.min_interfire_gap.unwrap_or(f64::INFINITY),
            pipeline: summary.max_pipeline_per_source,
            summary: Box::new(summary),
        });
    }
    Ok(summary)
}

/// Iterates the two-clique map and writes the orbit CSV, comparing against
/// the full engine every `sample_every` steps.
pub fn returnmap(config: &RunConfig, strict: bool) -> Result<OrbitReport, CliError> {
    let rm = config
        .returnmap
        .ok_or_else(|| CliError::Usage("`returnmap` needs a `returnmap` section in the config".into()))?;
    check_assumptions(config, &config.params, strict)?;
    let params = config.params;
    let s0 = TwoCliqueState::new(rm.theta0, rm.p, rm.q).map_err(|e| CliError::Infeasible(e.to_string()))?;
    let orbit = iterate_return_map(&s0, rm.steps, &params.curve, &params.coupling, params.tol_phase)
        .map_err(|e| CliError::Infeasible(e.to_string()))?;

    let path = &config.output.path;
    let mut sink = open_sink(path)?;
    writeln!(sink, "{}", output::ORBIT_HEADER).map_err(io_err(path))?;
    let mut sampled = 0;
    let mut max_delta: Option<f64> = None;
    for (step, s) in orbit.states.iter().enumerate() {
        let delta = match orbit.states.get(step + 1) {
            Some(next) if rm.sample_every > 0 && step % rm.sample_every == 0 => {
                let sim = two_clique_oracle_step(s.theta, s.p, s.q, &params)?;
                let d = if (sim.p, sim.q) == (next.p, next.q) { (sim.theta - next.theta).abs() } else { f64::INFINITY };
                sampled += 1;
                max_delta = Some(max_delta.map_or(d, |m| m.max(d)));
                Some(d)
            }
            _ => None,
        };
        output::orbit_row(&mut sink, step, s, delta).map_err(io_err(path))?;
    }
    sink.flush().map_err(io_err(path))?;
    Ok(OrbitReport {
        steps: rm.steps,
        min_theta: orbit.min_theta,
        reached_zero: orbit.reached_zero,
        sampled,
        max_oracle_delta: max_delta,
    })
}

/// The two-oscillator coincidence scenario: phases agree on a window while
/// one pulse is still in flight, then split when it lands. `n` is forced to 2.
pub fn fig3(config: &RunConfig, strict: bool) -> Result<Fig3Report, CliError> {
    let coupling = CouplingParams::new(2, config.params.epsilon(), config.params.tau())?;
    let params = ModelParams::with_tolerances(config.params.curve, coupling, config.params.tol_time, config.params.tol_phase)?;
    check_assumptions(config, &params, strict)?;
    let sc = fig3_construct(&params).map_err(|e| CliError::Infeasible(e.to_string()))?;
    let (tau, phi) = (params.tau(), sc.phi);
    let tol = Tolerances::from(&params);

    let path = &config.output.path;
    let mut sink = open_sink(path)?;
    writeln!(sink, "{}", output::TRACE_HEADER).map_err(io_err(path))?;
    let mut state = sc.state.clone();
    let row = |s: &NetworkState, sink: &mut Sink| {
        let v = is_completely_synchronized(s, tol);
        output::trace_row(sink, s.now(), s.phases(), v.synchronized).map_err(io_err(path))
    };
    row(&state, &mut sink)?;

    let mut max_spread = 0.0f64;
    let mut synchronized_on_window = false;
    const SAMPLES: usize = 8;
    for i in 0..SAMPLES {
        state.run_until_time(tau + phi * i as f64 / SAMPLES as f64)?;
        max_spread = max_spread.max(spread(state.phases()));
        synchronized_on_window |= is_completely_synchronized(&state, tol).synchronized;
        row(&state, &mut sink)?;
    }
    state.run_until_time(tau + phi)?;
    let spread_after = spread(state.phases());
    row(&state, &mut sink)?;
    let end = match config.mode {
        RunMode::Horizon(h) if h > tau + phi => h,
        _ => 2.0 * tau,
    };
    while state.next_event_time()? <= end {
        state.step()?;
        row(&state, &mut sink)?;
    }
    sink.flush().map_err(io_err(path))?;
    Ok(Fig3Report {
        phi,
        max_spread_on_window: max_spread,
        detector_synchronized_on_window: synchronized_on_window,
        spread_after,
    })
}

pub fn read_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Usage(format!("cannot read config {}: {e}", path.display()))
    })?;
    Ok(crate::config::parse_config(&text)?)
}
