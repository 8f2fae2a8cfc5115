use alloc::vec;
use alloc::vec::Vec;

use crate::engine::{FireLog, ModelParams, StepReport};

/// Run-level checks of the refractory bound and single-pulse pipelines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditReport {
    /// Smallest gap between consecutive firings of any oscillator; infinite
    /// when nothing fired twice.
    pub min_interfire_gap: f64,
    /// `min_interfire_gap > 2 tau`.
    pub lemma1_ok: bool,
    pub max_pipeline_per_source: usize,
    /// At most one pulse in flight per source, and no oscillator fired
    /// while one of its own pulses was still in flight.
    pub lemma2_ok: bool,
}

/// Audits a finished run from its step reports and firing logs.
pub fn audit_run(reports: &[StepReport], fire_logs: &[FireLog], params: &ModelParams) -> AuditReport {
    let min_gap = fire_logs
        .iter()
        .flat_map(|log| {
            let times: Vec<f64> = log.times().collect();
            (1..times.len()).map(move |k| times[k] - times[k - 1])
        })
        .fold(f64::INFINITY, f64::min);
    let mut max_pipeline = 0;
    let mut fired_in_flight = false;
    for r in reports {
        max_pipeline = max_pipeline.max(r.max_in_flight_per_source);
        fired_in_flight |= !r.fired_with_in_flight.is_empty();
    }
    report(min_gap, max_pipeline, fired_in_flight, params.tau())
}

fn report(min_gap: f64, max_pipeline: usize, fired_in_flight: bool, tau: f64) -> AuditReport {
    AuditReport {
        min_interfire_gap: min_gap,
        lemma1_ok: min_gap > 2.0 * tau,
        max_pipeline_per_source: max_pipeline,
        lemma2_ok: max_pipeline <= 1 && !fired_in_flight,
    }
}

/// Streaming form of [`audit_run`] for runs too long to keep every report.
#[derive(Debug, Clone)]
pub struct RunAuditor {
    tau: f64,
    last_fire: Vec<Option<f64>>,
    min_gap: f64,
    max_pipeline: usize,
    fired_in_flight: bool,
}

impl RunAuditor {
    pub fn new(params: &ModelParams) -> Self {
        RunAuditor {
            tau: params.tau(),
            last_fire: vec![None; params.n()],
            min_gap: f64::INFINITY,
            max_pipeline: 0,
            fired_in_flight: false,
        }
    }

    pub fn observe(&mut self, r: &StepReport) {
        for &i in &r.fired {
            if let Some(prev) = self.last_fire[i] {
                self.min_gap = self.min_gap.min(r.event_time - prev);
            }
            self.last_fire[i] = Some(r.event_time);
        }
        self.max_pipeline = self.max_pipeline.max(r.max_in_flight_per_source);
        self.fired_in_flight |= !r.fired_with_in_flight.is_empty();
    }

    pub fn finish(&self) -> AuditReport {
        report(self.min_gap, self.max_pipeline, self.fired_in_flight, self.tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::NetworkState;
    use crate::phase::{CouplingParams, CurveSpec};

    fn params(n: usize, epsilon: f64) -> ModelParams {
        ModelParams::new(
            CurveSpec::exponential(1.05).unwrap(),
            CouplingParams::new(n, epsilon, 0.1).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn uncoupled_gap_is_one_period() {
        let p = params(3, 0.0);
        let mut s = NetworkState::new(p, &[0.3, 0.6, 0.9]).unwrap();
        let reports = s.run_until_time(5.0).unwrap();
        let a = audit_run(&reports, s.fire_logs(), &p);
        assert!((a.min_interfire_gap - 1.0).abs() < 1e-12);
        assert!(a.lemma1_ok && a.lemma2_ok);
        assert_eq!(a.max_pipeline_per_source, 1);
    }

    #[test]
    fn streaming_matches_batch() {
        let p = params(10, 0.01);
        let phases: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
        let mut s = NetworkState::new(p, &phases).unwrap();
        let reports = s.run_until_time(20.0).unwrap();
        let mut auditor = RunAuditor::new(&p);
        reports.iter().for_each(|r| auditor.observe(r));
        assert_eq!(auditor.finish(), audit_run(&reports, s.fire_logs(), &p));
    }

    #[test]
    fn flags_short_gaps_and_overlapping_pulses() {
        let p = params(2, 0.0);
        let r = |t: f64, fired: Vec<usize>, inflight: usize, overlap: Vec<usize>| StepReport {
            event_time: t,
            arrivals_per_receiver: Vec::new(),
            fired,
            spikes_scheduled: Vec::new(),
            max_in_flight_per_source: inflight,
            fired_with_in_flight: overlap,
        };
        let mut auditor = RunAuditor::new(&p);
        auditor.observe(&r(0.0, vec![0], 1, vec![]));
        auditor.observe(&r(0.15, vec![0], 2, vec![0]));
        let a = auditor.finish();
        assert!(!a.lemma1_ok && !a.lemma2_ok);
        assert_eq!(a.max_pipeline_per_source, 2);
    }
}
