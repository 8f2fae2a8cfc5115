//! One-cycle return map of two internally synchronized cliques.
//!
//! Start: clique A (size `m`) at phase `1 - theta`, clique B (size `n`) at
//! threshold, nothing in flight. One cycle later the network is again in
//! that shape, with the lagging clique at gap `G(theta)`. Which formula
//! applies depends on whether `theta` is below the delay and on which
//! clique is currently lagging:
//!
//! ```text
//! G1(t) = F_m(F_{n-1}(tau) + t) - F_{m-1}(F_n(tau - t) + t)   0 <= t < tau, A lags
//! G2(t) = F_n(F_{m-1}(tau) + t) - F_{n-1}(F_m(tau - t) + t)   0 <= t < tau, B lags
//! G3(t) = F_n(1 - t + tau) - F_{n-1}(tau)                     tau <= t < 1, A lags
//! G4(t) = F_m(1 - t + tau) - F_{m-1}(tau)                     tau <= t < 1, B lags
//! ```
//!
//! `G3` and `G4` swap which clique lags. Every branch is positive away from
//! `t = 0`, so the gap never closes.
//!
//! The oracles here run the same configurations through the full event
//! engine and read the gap off the simulation.

use alloc::format;
use alloc::vec::Vec;
use core::ops::Range;

use crate::engine::{ModelParams, NetworkState, PendingSpike};
use crate::error::{Error, Result};
use crate::phase::{validate_assumptions, CouplingParams, CurveSpec};

/// Gap `theta` between a lagging clique of size `p` and a firing clique of size `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoCliqueState {
    pub theta: f64,
    pub p: usize,
    pub q: usize,
}

impl TwoCliqueState {
    pub fn new(theta: f64, p: usize, q: usize) -> Result<Self> {
        let s = TwoCliqueState { theta, p, q };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if !(self.theta >= 0.0 && self.theta < 1.0) {
            return Err(Error::OutOfDomain { quantity: "theta", value: self.theta });
        }
        if self.p == 0 || self.q == 0 {
            return Err(Error::InvalidParameter {
                name: "clique size",
                reason: "both cliques need at least one oscillator",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    G1,
    G2,
    G3,
    G4,
}

/// The return map for a fixed labelling: `m` is the size of the clique
/// that lags at the start of the orbit, `n = N - m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoCliqueMap {
    curve: CurveSpec,
    coupling: CouplingParams,
    m: usize,
    n: usize,
}

impl TwoCliqueMap {
    /// Requires `1 <= m < N` and `f(2 tau) + N epsilon < 1`.
    pub fn new(curve: CurveSpec, coupling: CouplingParams, m: usize) -> Result<Self> {
        let report = validate_assumptions(&curve, &coupling)?;
        if !report.a2_holds {
            return Err(Error::InfeasibleScenario(
                "the return map requires f(2 tau) + N epsilon < 1",
            ));
        }
        if m == 0 || m >= coupling.n {
            return Err(Error::InvalidParameter {
                name: "m",
                reason: "clique size must be in [1, N)",
            });
        }
        Ok(TwoCliqueMap { curve, coupling, m, n: coupling.n - m })
    }

    fn jump(&self, k: usize, theta: f64) -> f64 {
        self.curve
            .jump_unchecked(self.coupling.epsilon, theta.clamp(0.0, 1.0), k as u32)
    }

    fn short_gap(&self, theta: f64, lag: usize, lead: usize) -> f64 {
        let tau = self.coupling.tau;
        self.jump(lag, self.jump(lead - 1, tau) + theta)
            - self.jump(lag - 1, self.jump(lead, tau - theta) + theta)
    }

    fn long_gap(&self, theta: f64, lead: usize) -> f64 {
        let tau = self.coupling.tau;
        self.jump(lead, 1.0 - theta + tau) - self.jump(lead - 1, tau)
    }

    pub fn g1(&self, theta: f64) -> f64 {
        self.short_gap(theta, self.m, self.n)
    }

    pub fn g2(&self, theta: f64) -> f64 {
        self.short_gap(theta, self.n, self.m)
    }

    pub fn g3(&self, theta: f64) -> f64 {
        self.long_gap(theta, self.n)
    }

    pub fn g4(&self, theta: f64) -> f64 {
        self.long_gap(theta, self.m)
    }

    /// Which branch applies to `s`. A gap equal to `tau` takes the long branch.
    pub fn branch(&self, s: &TwoCliqueState) -> Result<Branch> {
        s.validate()?;
        let short = s.theta < self.coupling.tau;
        match ((s.p, s.q) == (self.m, self.n), (s.p, s.q) == (self.n, self.m), short) {
            (true, _, true) => Ok(Branch::G1),
            (true, _, false) => Ok(Branch::G3),
            (false, true, true) => Ok(Branch::G2),
            (false, true, false) => Ok(Branch::G4),
            _ => Err(Error::InvalidParameter {
                name: "clique sizes",
                reason: "state sizes do not match the map's labelling",
            }),
        }
    }

    pub fn apply(&self, s: &TwoCliqueState) -> Result<TwoCliqueState> {
        let branch = self.branch(s)?;
        // G1(0) = G2(0) = 0 exactly; evaluating would leave rounding residue.
        if s.theta == 0.0 {
            return Ok(*s);
        }
        let (theta, p, q) = match branch {
            Branch::G1 => (self.g1(s.theta), s.p, s.q),
            Branch::G2 => (self.g2(s.theta), s.p, s.q),
            Branch::G3 => (self.g3(s.theta), s.q, s.p),
            Branch::G4 => (self.g4(s.theta), s.q, s.p),
        };
        Ok(TwoCliqueState { theta: theta.max(0.0), p, q })
    }

    /// Gap reached from the pending-pulse configuration: clique A (size `m`)
    /// at phase `phi < tau` with its pulses arriving in `tau - phi`, clique
    /// B at threshold. The lagging clique afterwards is B.
    pub fn from_pending_shape(&self, phi: f64) -> Result<TwoCliqueState> {
        let tau = self.coupling.tau;
        if !(phi > 0.0 && phi < tau) {
            return Err(Error::OutOfDomain { quantity: "phi", value: phi });
        }
        let (m, n) = (self.m, self.n);
        let lead = self.jump(n, self.jump(m - 1, tau) + phi);
        let lag = self.jump(n - 1, self.jump(m, tau - phi) + phi);
        TwoCliqueState::new(lead - lag, n, m)
    }
}

/// One application of the return map, labelling the current lagging
/// clique as `m` (so only `G1` and `G3` are reachable). Use
/// [`TwoCliqueMap`] to keep a fixed labelling across an orbit.
pub fn two_clique_map(s: &TwoCliqueState, curve: &CurveSpec, coupling: &CouplingParams) -> Result<TwoCliqueState> {
    s.validate()?;
    if s.p + s.q != coupling.n {
        return Err(Error::InvalidParameter { name: "clique sizes", reason: "P + Q must equal N" });
    }
    TwoCliqueMap::new(*curve, *coupling, s.p)?.apply(s)
}

/// An orbit of the return map.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnMapOrbit {
    /// `s0` followed by every iterate.
    pub states: Vec<TwoCliqueState>,
    /// Smallest gap over the iterates (excluding `s0`).
    pub min_theta: f64,
    /// Some iterate came within `tol` of zero.
    pub reached_zero: bool,
}

pub fn iterate_return_map(
    s0: &TwoCliqueState,
    steps: usize,
    curve: &CurveSpec,
    coupling: &CouplingParams,
    tol: f64,
) -> Result<ReturnMapOrbit> {
    s0.validate()?;
    if s0.p + s0.q != coupling.n {
        return Err(Error::InvalidParameter { name: "clique sizes", reason: "P + Q must equal N" });
    }
    let map = TwoCliqueMap::new(*curve, *coupling, s0.p)?;
    let mut states = Vec::with_capacity(steps + 1);
    states.push(*s0);
    let mut min_theta = f64::INFINITY;
    let mut s = *s0;
    for _ in 0..steps {
        s = map.apply(&s)?;
        min_theta = min_theta.min(s.theta);
        states.push(s);
    }
    Ok(ReturnMapOrbit { states, min_theta, reached_zero: min_theta <= tol })
}

/// Clique A (`0..p`) at phase `1 - phi`, clique B (`p..p+q`) at threshold,
/// nothing in flight.
pub fn lemma6_initial_state(phi: f64, p: usize, q: usize, params: &ModelParams) -> Result<NetworkState> {
    check_sizes(p, q, params)?;
    if !(0.0..1.0).contains(&phi) {
        return Err(Error::OutOfDomain { quantity: "phi", value: phi });
    }
    let mut phases = Vec::with_capacity(p + q);
    phases.extend(core::iter::repeat_n(1.0 - phi, p));
    phases.extend(core::iter::repeat_n(1.0, q));
    NetworkState::new(*params, &phases)
}

/// Clique A (`0..m`) at phase `phi < tau` with every member's pulse arriving
/// in `tau - phi`; clique B (`m..m+n`) at threshold.
pub fn lemma7_initial_state(phi: f64, m: usize, n: usize, params: &ModelParams) -> Result<NetworkState> {
    check_sizes(m, n, params)?;
    let tau = params.tau();
    if !(phi > 0.0 && phi < tau) {
        return Err(Error::OutOfDomain { quantity: "phi", value: phi });
    }
    let mut phases = Vec::with_capacity(m + n);
    phases.extend(core::iter::repeat_n(phi, m));
    phases.extend(core::iter::repeat_n(1.0, n));
    let mut state = NetworkState::new(*params, &phases)?;
    let spikes: Vec<PendingSpike> = (0..m)
        .map(|source| PendingSpike { arrival_time: tau - phi, source })
        .collect();
    state.inject_pending(&spikes, true)?;
    Ok(state)
}

fn check_sizes(p: usize, q: usize, params: &ModelParams) -> Result<()> {
    if p == 0 || q == 0 || p + q != params.n() {
        return Err(Error::InvalidParameter {
            name: "clique sizes",
            reason: "need P, Q >= 1 and P + Q = N",
        });
    }
    Ok(())
}

/// Simulates the two-clique configuration in the full engine and returns
/// the gap at the next instant one clique fires with nothing else in flight.
pub fn two_clique_oracle_step(phi: f64, p: usize, q: usize, params: &ModelParams) -> Result<TwoCliqueState> {
    let mut state = lemma6_initial_state(phi, p, q, params)?;
    run_to_return(&mut state, 0..p, p..p + q)
}

/// Engine counterpart of [`TwoCliqueMap::from_pending_shape`].
pub fn lemma7_oracle_step(phi: f64, m: usize, n: usize, params: &ModelParams) -> Result<TwoCliqueState> {
    let mut state = lemma7_initial_state(phi, m, n, params)?;
    run_to_return(&mut state, 0..m, m..m + n)
}

fn run_to_return(state: &mut NetworkState, a: Range<usize>, b: Range<usize>) -> Result<TwoCliqueState> {
    let max_steps = 8 * state.n() + 64;
    let first = state.step()?;
    if first.fired.len() == state.n() {
        return TwoCliqueState::new(0.0, a.len(), b.len());
    }
    for _ in 0..max_steps {
        let report = state.step()?;
        check_clique(state, a.clone())?;
        check_clique(state, b.clone())?;
        if state.pipeline().len() != report.fired.len() {
            continue;
        }
        let fired = &report.fired;
        let (firing, lagging) = if fired.as_slice() == as_vec(b.clone()).as_slice() {
            (b.clone(), a.clone())
        } else if fired.as_slice() == as_vec(a.clone()).as_slice() {
            (a.clone(), b.clone())
        } else if fired.is_empty() {
            continue;
        } else {
            return Err(Error::Structural(format!(
                "firing group {fired:?} at t = {} is not a single clique",
                report.event_time
            )));
        };
        let theta = 1.0 - state.phases()[lagging.start];
        return TwoCliqueState::new(theta, lagging.len(), firing.len());
    }
    Err(Error::Structural(format!(
        "no two-clique return within {max_steps} events"
    )))
}

fn as_vec(r: Range<usize>) -> Vec<usize> {
    r.collect()
}

fn check_clique(state: &NetworkState, clique: Range<usize>) -> Result<()> {
    let phases = &state.phases()[clique.clone()];
    let tol = state.params().tol_phase;
    if phases.iter().any(|&x| (x - phases[0]).abs() > tol) {
        return Err(Error::Structural(format!(
            "clique {clique:?} split at t = {}",
            state.now()
        )));
    }
    Ok(())
}
