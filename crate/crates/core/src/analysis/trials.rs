use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::audit::{AuditReport, RunAuditor};
use super::sync::{cluster_partition, is_completely_synchronized, spread};
use super::Tolerances;
use crate::engine::{ModelParams, NetworkState};
use crate::error::Result;

/// What one simulated trial did.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    /// The detector fired at `t = 0` or at some event boundary.
    pub sync_detected: bool,
    /// Time of the first positive detection.
    pub sync_time: Option<f64>,
    /// `max - min` phase at the horizon.
    pub terminal_spread: f64,
    /// Clusters at the horizon under the reporting tolerance.
    pub cluster_count: usize,
    pub audit: AuditReport,
}

/// Runs one network to `horizon`, testing for complete synchronization at
/// the start and after every event.
pub fn run_trial(params: &ModelParams, initial_phases: &[f64], horizon: f64, cluster_tol: f64) -> Result<TrialOutcome> {
    let mut state = NetworkState::new(*params, initial_phases)?;
    let tol = Tolerances::from(params);
    let mut auditor = RunAuditor::new(params);
    let mut sync_time = is_completely_synchronized(&state, tol).synchronized.then_some(0.0);
    while state.next_event_time()? <= horizon {
        let report = state.step()?;
        auditor.observe(&report);
        // phase spread is the cheap test; pipelines only matter once it passes
        if sync_time.is_none()
            && spread(state.phases()) <= tol.phase
            && is_completely_synchronized(&state, tol).synchronized
        {
            sync_time = Some(report.event_time);
        }
    }
    state.run_until_time(horizon)?;
    Ok(TrialOutcome {
        sync_detected: sync_time.is_some(),
        sync_time,
        terminal_spread: spread(state.phases()),
        cluster_count: cluster_partition(&state, Tolerances::uniform(cluster_tol)).len(),
        audit: auditor.finish(),
    })
}

/// Aggregate over a batch of trials.
#[derive(Debug, Clone, PartialEq)]
pub struct DesyncSummary {
    pub trials: usize,
    pub sync_detected_count: usize,
    pub min_spread: f64,
    pub median_spread: f64,
    /// cluster count -> number of trials ending with it
    pub cluster_histogram: BTreeMap<usize, usize>,
    pub audits_ok: usize,
}

/// Merges outcomes in the order given.
pub fn summarize(outcomes: &[TrialOutcome]) -> DesyncSummary {
    let mut spreads: Vec<f64> = outcomes.iter().map(|o| o.terminal_spread).collect();
    spreads.sort_by(f64::total_cmp);
    let median_spread = match spreads.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => spreads[n / 2],
        n => 0.5 * (spreads[n / 2 - 1] + spreads[n / 2]),
    };
    let mut cluster_histogram = BTreeMap::new();
    for o in outcomes {
        *cluster_histogram.entry(o.cluster_count).or_insert(0) += 1;
    }
    DesyncSummary {
        trials: outcomes.len(),
        sync_detected_count: outcomes.iter().filter(|o| o.sync_detected).count(),
        min_spread: spreads.first().copied().unwrap_or(f64::NAN),
        median_spread,
        cluster_histogram,
        audits_ok: outcomes
            .iter()
            .filter(|o| o.audit.lemma1_ok && o.audit.lemma2_ok)
            .count(),
    }
}

/// Runs `trials` independent simulations with initial phases drawn by
/// `sampler(trial_index)`, sequentially and in index order.
pub fn desync_trial(
    params: &ModelParams,
    mut sampler: impl FnMut(usize) -> Vec<f64>,
    horizon: f64,
    trials: usize,
    cluster_tol: f64,
) -> Result<DesyncSummary> {
    let outcomes = (0..trials)
        .map(|k| run_trial(params, &sampler(k), horizon, cluster_tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(&outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::{CouplingParams, CurveSpec};

    fn params(n: usize) -> ModelParams {
        ModelParams::new(
            CurveSpec::exponential(1.05).unwrap(),
            CouplingParams::new(n, 0.001, 0.1).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn identical_phases_detected_at_start() {
        let o = run_trial(&params(5), &[0.3; 5], 3.0, 1e-6).unwrap();
        assert!(o.sync_detected);
        assert_eq!(o.sync_time, Some(0.0));
        assert_eq!(o.cluster_count, 1);
    }

    #[test]
    fn summary_statistics() {
        let p = params(10);
        let s = desync_trial(
            &p,
            |k| (0..10).map(|i| ((i * 7 + k * 3) % 10 + 1) as f64 / 10.0).collect(),
            5.0,
            4,
            1e-6,
        )
        .unwrap();
        assert_eq!(s.trials, 4);
        assert_eq!(s.sync_detected_count, 0);
        assert!(s.min_spread > 0.0 && s.median_spread >= s.min_spread);
        assert_eq!(s.cluster_histogram.values().sum::<usize>(), 4);
        assert_eq!(s.audits_ok, 4);
    }

    #[test]
    fn median_of_even_count() {
        let mk = |spread| TrialOutcome {
            sync_detected: false,
            sync_time: None,
            terminal_spread: spread,
            cluster_count: 2,
            audit: AuditReport {
                min_interfire_gap: 1.0,
                lemma1_ok: true,
                max_pipeline_per_source: 1,
                lemma2_ok: true,
            },
        };
        let s = summarize(&[mk(0.4), mk(0.1), mk(0.2), mk(0.3)]);
        assert!((s.median_spread - 0.25).abs() < 1e-15);
        assert_eq!(s.min_spread, 0.1);
        assert_eq!(s.cluster_histogram.get(&2), Some(&4));
    }
}
