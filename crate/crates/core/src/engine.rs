//! Deterministic event-driven simulation of the delayed pulse-coupled network.
//!
//! Between events every phase drifts at unit speed. An event is either a
//! batch of pulse arrivals or a phase reaching threshold; events closer
//! than `tol_time` are processed as one group, in this order:
//!
//! 1. drift all phases to the event time;
//! 2. apply the grouped arrivals, `phase_j <- F_{m_j}(phase_j)` where `m_j`
//!    counts arrived pulses not emitted by `j` itself;
//! 3. every oscillator at threshold fires: it is logged, reset to 0 and a
//!    pulse is scheduled to arrive `tau` later.
//!
//! A pulse emitted at `t` cannot arrive before `t + tau`, so one pass per
//! group is enough.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::phase::{CouplingParams, CurveSpec};

pub const DEFAULT_TOL_TIME: f64 = 1e-9;
pub const DEFAULT_TOL_PHASE: f64 = 1e-12;

/// Curve, coupling and the numerical tolerances of the engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub curve: CurveSpec,
    pub coupling: CouplingParams,
    /// Events closer than this are processed together.
    pub tol_time: f64,
    /// Phases within this of 1 count as threshold.
    pub tol_phase: f64,
}

impl ModelParams {
    pub fn new(curve: CurveSpec, coupling: CouplingParams) -> Result<Self> {
        Self::with_tolerances(curve, coupling, DEFAULT_TOL_TIME, DEFAULT_TOL_PHASE)
    }

    pub fn with_tolerances(
        curve: CurveSpec,
        coupling: CouplingParams,
        tol_time: f64,
        tol_phase: f64,
    ) -> Result<Self> {
        let params = ModelParams { curve, coupling, tol_time, tol_phase };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        self.coupling.validate()?;
        if !(self.tol_time >= 0.0 && self.tol_time < self.coupling.tau / 100.0) {
            return Err(Error::InvalidParameter {
                name: "tol_time",
                reason: "must be non-negative and below tau / 100",
            });
        }
        if !(self.tol_phase >= 0.0 && self.tol_phase < 1.0) {
            return Err(Error::InvalidParameter {
                name: "tol_phase",
                reason: "must be in [0, 1)",
            });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.coupling.n
    }

    pub fn tau(&self) -> f64 {
        self.coupling.tau
    }

    pub fn epsilon(&self) -> f64 {
        self.coupling.epsilon
    }

    /// `F_m(theta)` for this model's curve and coupling strength.
    pub fn jump(&self, theta: f64, m: u32) -> f64 {
        self.curve.jump_unchecked(self.coupling.epsilon, theta, m)
    }
}

/// A pulse in flight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendingSpike {
    pub arrival_time: f64,
    pub source: usize,
}

/// How much firing history each oscillator keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FireLogRetention {
    #[default]
    Unbounded,
    /// Keep only the most recent `K` firing times.
    LastK(usize),
}

/// Firing times of one oscillator, oldest first.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FireLog {
    times: VecDeque<f64>,
    total: u64,
}

impl FireLog {
    /// Retained firing times, oldest first.
    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.times.iter().copied()
    }

    /// Number of firings since the run started, including evicted ones.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn last(&self) -> Option<f64> {
        self.times.back().copied()
    }

    fn push(&mut self, t: f64, retention: FireLogRetention) {
        self.times.push_back(t);
        self.total += 1;
        if let FireLogRetention::LastK(k) = retention {
            while self.times.len() > k {
                self.times.pop_front();
            }
        }
    }
}

/// What one grouped event did.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub event_time: f64,
    /// `(receiver, m)` for every oscillator that received `m > 0` pulses,
    /// ascending by receiver.
    pub arrivals_per_receiver: Vec<(usize, u32)>,
    /// Oscillators that fired, ascending.
    pub fired: Vec<usize>,
    pub spikes_scheduled: Vec<PendingSpike>,
    /// Largest number of in-flight pulses any single source had, either just
    /// before the event's arrivals were removed or just after scheduling.
    pub max_in_flight_per_source: usize,
    /// Firers that still had a pulse in flight at the firing instant.
    pub fired_with_in_flight: Vec<usize>,
}

/// Phases, in-flight pulses and firing history of a network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    params: ModelParams,
    now: f64,
    phases: Vec<f64>,
    /// Sorted by arrival time.
    pipeline: VecDeque<PendingSpike>,
    fire_log: Vec<FireLog>,
    retention: FireLogRetention,
}

impl NetworkState {
    /// Starts a network at `t = 0` with an empty pipeline.
    ///
    /// Every initial phase must lie in `(0, 1]`; a phase of exactly 1 fires
    /// at the first step.
    pub fn new(params: ModelParams, initial_phases: &[f64]) -> Result<Self> {
        params.validate()?;
        let n = params.n();
        if initial_phases.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: initial_phases.len() });
        }
        if let Some((index, &value)) = initial_phases
            .iter()
            .enumerate()
            .find(|(_, &p)| !(p > 0.0 && p <= 1.0))
        {
            return Err(Error::InvalidInitialPhase { index, value });
        }
        Ok(NetworkState {
            params,
            now: 0.0,
            phases: initial_phases.to_vec(),
            pipeline: VecDeque::with_capacity(n),
            fire_log: vec![FireLog::default(); n],
            retention: FireLogRetention::Unbounded,
        })
    }

    pub fn with_retention(mut self, retention: FireLogRetention) -> Self {
        self.retention = retention;
        self
    }

    /// Adds in-flight pulses, e.g. to build a mid-run configuration that no
    /// start from rest can produce.
    ///
    /// Every arrival must lie in `(now, now + tau]`. With `check_phase_offset`
    /// each source's phase must equal `tau - offset` to within `tol_time`,
    /// i.e. the source fired `tau - offset` ago and has only drifted since.
    pub fn inject_pending(&mut self, spikes: &[PendingSpike], check_phase_offset: bool) -> Result<()> {
        let tau = self.params.tau();
        for spike in spikes {
            if spike.source >= self.phases.len() {
                return Err(Error::IndexOutOfRange { index: spike.source, len: self.phases.len() });
            }
            let offset = spike.arrival_time - self.now;
            if !(offset > 0.0 && offset <= tau) {
                return Err(Error::InvalidSpike { source: spike.source, offset });
            }
            let phase = self.phases[spike.source];
            if check_phase_offset && (phase - (tau - offset)).abs() > self.params.tol_time {
                return Err(Error::InconsistentSpike { source: spike.source, offset, phase });
            }
        }
        for &spike in spikes {
            let at = self
                .pipeline
                .partition_point(|s| s.arrival_time <= spike.arrival_time);
            self.pipeline.insert(at, spike);
        }
        Ok(())
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn now(&self) -> f64 {
        self.now
    }

    pub fn n(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// In-flight pulses, earliest arrival first.
    pub fn pipeline(&self) -> impl ExactSizeIterator<Item = &PendingSpike> + '_ {
        self.pipeline.iter()
    }

    /// Time-to-arrival of every pulse in flight from `source`, ascending.
    pub fn offsets(&self, source: usize) -> Vec<f64> {
        self.pipeline
            .iter()
            .filter(|s| s.source == source)
            .map(|s| s.arrival_time - self.now)
            .collect()
    }

    pub fn fire_log(&self, index: usize) -> &FireLog {
        &self.fire_log[index]
    }

    pub fn fire_logs(&self) -> &[FireLog] {
        &self.fire_log
    }

    /// Time of the next grouped event: the earlier of the first pulse
    /// arrival and the first threshold crossing under pure drift.
    pub fn next_event_time(&self) -> Result<f64> {
        let to_threshold = self
            .phases
            .iter()
            .map(|p| 1.0 - p)
            .fold(f64::INFINITY, f64::min);
        let crossing = self.now + to_threshold;
        let arrival = self.pipeline.front().map_or(f64::INFINITY, |s| s.arrival_time);
        let t = crossing.min(arrival);
        if t.is_finite() {
            Ok(t)
        } else {
            Err(Error::NoFutureEvent)
        }
    }

    /// Processes exactly one grouped event.
    pub fn step(&mut self) -> Result<StepReport> {
        let n = self.phases.len();
        let t = self.next_event_time()?;
        let group_end = t + self.params.tol_time;
        let dt = t - self.now;

        for phase in &mut self.phases {
            if self.now + (1.0 - *phase) <= group_end {
                *phase = 1.0;
            } else {
                *phase += dt;
            }
        }

        let mut in_flight = vec![0u32; n];
        for spike in &self.pipeline {
            in_flight[spike.source] += 1;
        }
        let mut max_in_flight = in_flight.iter().copied().max().unwrap_or(0);

        let mut arrived_from = vec![0u32; n];
        let mut arrived = 0u32;
        while let Some(spike) = self.pipeline.front() {
            if spike.arrival_time > group_end {
                break;
            }
            arrived_from[spike.source] += 1;
            arrived += 1;
            self.pipeline.pop_front();
        }

        let mut arrivals_per_receiver = Vec::new();
        if arrived > 0 {
            for (j, phase) in self.phases.iter_mut().enumerate() {
                let m = arrived - arrived_from[j];
                if m > 0 {
                    *phase = self.params.jump(*phase, m);
                    arrivals_per_receiver.push((j, m));
                }
            }
        }

        let threshold = 1.0 - self.params.tol_phase;
        let arrival_time = t + self.params.tau();
        let mut fired = Vec::new();
        let mut fired_with_in_flight = Vec::new();
        let mut spikes_scheduled = Vec::new();
        for (j, phase) in self.phases.iter_mut().enumerate() {
            if *phase >= threshold {
                if in_flight[j] > 0 {
                    fired_with_in_flight.push(j);
                }
                *phase = 0.0;
                self.fire_log[j].push(t, self.retention);
                let spike = PendingSpike { arrival_time, source: j };
                self.pipeline.push_back(spike);
                spikes_scheduled.push(spike);
                fired.push(j);
                let after = in_flight[j] - arrived_from[j] + 1;
                max_in_flight = max_in_flight.max(after);
            }
        }

        self.now = t;
        Ok(StepReport {
            event_time: t,
            arrivals_per_receiver,
            fired,
            spikes_scheduled,
            max_in_flight_per_source: max_in_flight as usize,
            fired_with_in_flight,
        })
    }

    /// Drifts to `t` without processing events; `t` must not pass the next event.
    fn drift_to(&mut self, t: f64) {
        let dt = t - self.now;
        for phase in &mut self.phases {
            *phase = (*phase + dt).min(1.0);
        }
        self.now = t;
    }

    /// Steps through every event up to and including `horizon`, then drifts
    /// to `horizon` exactly.
    pub fn run_until_time(&mut self, horizon: f64) -> Result<Vec<StepReport>> {
        let mut reports = Vec::new();
        self.run_until_time_with(horizon, |r| reports.push(r))?;
        Ok(reports)
    }

    /// Like [`run_until_time`](Self::run_until_time), handing each report to
    /// `on_step` instead of collecting them.
    pub fn run_until_time_with(
        &mut self,
        horizon: f64,
        mut on_step: impl FnMut(StepReport),
    ) -> Result<()> {
        if horizon.is_nan() || horizon < self.now {
            return Err(Error::InvalidParameter {
                name: "horizon",
                reason: "must not lie before the current time",
            });
        }
        while self.next_event_time()? <= horizon {
            let report = self.step()?;
            on_step(report);
        }
        self.drift_to(horizon);
        Ok(())
    }

    /// Advances through the next `k` firings of `reference` and returns their times.
    pub fn run_until_ref_fires(&mut self, reference: usize, k: usize) -> Result<Vec<f64>> {
        if reference >= self.n() {
            return Err(Error::IndexOutOfRange { index: reference, len: self.n() });
        }
        let mut times = Vec::with_capacity(k);
        while times.len() < k {
            let report = self.step()?;
            if report.fired.binary_search(&reference).is_ok() {
                times.push(report.event_time);
            }
        }
        Ok(times)
    }
}
