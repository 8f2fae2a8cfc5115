//! Phase-to-state curve, its inverse and the pulse jump map.
//!
//! An oscillator's phase drifts at unit speed on `[0, 1]`; its state is
//! `x = f(phase)` for a smooth, increasing, concave curve with `f(0) = 0`
//! and `f(1) = 1`. Receiving `m` pulses at once advances the state by
//! `m * epsilon`, clamped at threshold, which in phase coordinates is
//! `F_m(theta) = f^-1(min(1, f(theta) + m * epsilon))`.

use crate::error::{Error, Result};

/// Inputs this far outside `[0, 1]` are clamped rather than rejected.
const DOMAIN_SLACK: f64 = 1e-12;

/// Concave phase-to-state curve.
///
/// Only one family is provided today: the exponential curve
/// `f(phi) = I * (1 - ((I - 1) / I)^phi)` with dissipation `I > 1`. New
/// families are added as variants; everything downstream relies only on
/// `f(0) = 0`, `f(1) = 1`, `f' > 0` and `f'' < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveSpec {
    Exponential(ExponentialCurve),
}

/// `f(phi) = I * (1 - ((I - 1) / I)^phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialCurve {
    dissipation: f64,
    /// `ln((I - 1) / I)`; always negative.
    log_ratio: f64,
}

impl CurveSpec {
    /// The exponential family with dissipation `i`; requires `i > 1`.
    pub fn exponential(i: f64) -> Result<Self> {
        if !(i.is_finite() && i > 1.0) {
            return Err(Error::InvalidParameter {
                name: "I",
                reason: "dissipation must be finite and greater than 1",
            });
        }
        Ok(CurveSpec::Exponential(ExponentialCurve {
            dissipation: i,
            log_ratio: libm::log1p(-1.0 / i),
        }))
    }

    pub fn dissipation(&self) -> f64 {
        match *self {
            CurveSpec::Exponential(ExponentialCurve { dissipation, .. }) => dissipation,
        }
    }

    /// `f(phi)`.
    pub fn eval(&self, phi: f64) -> Result<f64> {
        Ok(self.eval_unchecked(check_unit("phi", phi)?))
    }

    /// `f^-1(x)`.
    pub fn inverse(&self, x: f64) -> Result<f64> {
        Ok(self.inverse_unchecked(check_unit("x", x)?))
    }

    /// `f'(phi)`.
    pub fn slope(&self, phi: f64) -> Result<f64> {
        let phi = check_unit("phi", phi)?;
        match *self {
            CurveSpec::Exponential(ExponentialCurve { dissipation, log_ratio }) => {
                Ok(-dissipation * log_ratio * libm::exp(log_ratio * phi))
            }
        }
    }

    /// `F_m(theta)`: the phase after `m` simultaneous pulses of strength
    /// `epsilon`. Returns exactly `1.0` when the pulses reach threshold.
    pub fn jump(&self, epsilon: f64, theta: f64, m: u32) -> Result<f64> {
        let theta = check_unit("theta", theta)?;
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: "coupling strength must be finite and non-negative",
            });
        }
        Ok(self.jump_unchecked(epsilon, theta, m))
    }

    pub(crate) fn eval_unchecked(&self, phi: f64) -> f64 {
        match *self {
            CurveSpec::Exponential(ExponentialCurve { dissipation, log_ratio }) => {
                (-dissipation * libm::expm1(log_ratio * phi)).clamp(0.0, 1.0)
            }
        }
    }

    pub(crate) fn inverse_unchecked(&self, x: f64) -> f64 {
        match *self {
            CurveSpec::Exponential(ExponentialCurve { dissipation, log_ratio }) => {
                (libm::log1p(-x / dissipation) / log_ratio).clamp(0.0, 1.0)
            }
        }
    }

    pub(crate) fn jump_unchecked(&self, epsilon: f64, theta: f64, m: u32) -> f64 {
        if m == 0 {
            return theta;
        }
        let x = self.eval_unchecked(theta) + f64::from(m) * epsilon;
        if x >= 1.0 {
            1.0
        } else {
            self.inverse_unchecked(x)
        }
    }
}

fn check_unit(quantity: &'static str, value: f64) -> Result<f64> {
    if (-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&value) {
        Ok(value.clamp(0.0, 1.0))
    } else {
        Err(Error::OutOfDomain { quantity, value })
    }
}

/// Network size, coupling strength and transmission delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    pub n: usize,
    pub epsilon: f64,
    pub tau: f64,
}

impl CouplingParams {
    pub fn new(n: usize, epsilon: f64, tau: f64) -> Result<Self> {
        let params = CouplingParams { n, epsilon, tau };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: "at least two oscillators are required",
            });
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                reason: "coupling strength must be finite and non-negative",
            });
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::InvalidParameter {
                name: "tau",
                reason: "transmission delay must be finite and positive",
            });
        }
        Ok(())
    }
}

/// Outcome of checking `f(2 tau) + N epsilon < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssumptionReport {
    pub a2_value: f64,
    pub a2_holds: bool,
    pub margin: f64,
}

/// Evaluates the small-delay, weak-coupling condition `f(2 tau) + N epsilon < 1`.
///
/// When `2 tau > 1` the curve is evaluated at 1 and the condition is
/// reported as failing.
pub fn validate_assumptions(curve: &CurveSpec, coupling: &CouplingParams) -> Result<AssumptionReport> {
    coupling.validate()?;
    let two_tau = 2.0 * coupling.tau;
    let a2_value = curve.eval_unchecked(two_tau.min(1.0)) + coupling.n as f64 * coupling.epsilon;
    let a2_holds = two_tau <= 1.0 && a2_value < 1.0;
    Ok(AssumptionReport {
        a2_value,
        a2_holds,
        margin: 1.0 - a2_value,
    })
}
