//! Analysis over simulated networks: synchronization and cluster detection,
//! run audits, the two-clique return map, stroboscopic sampling and
//! batch desynchronization trials.

mod audit;
mod fig3;
mod return_map;
mod strobe;
mod sync;
mod trials;

pub use audit::{audit_run, AuditReport, RunAuditor};
pub use fig3::{fig3_construct, Fig3Scenario};
pub use return_map::{
    iterate_return_map, lemma6_initial_state, lemma7_initial_state, lemma7_oracle_step, two_clique_map, two_clique_oracle_step, Branch,
    ReturnMapOrbit, TwoCliqueMap, TwoCliqueState,
};
pub use strobe::{frame_cluster_count, settled_cluster_count, stroboscopic_run, stroboscopic_run_with, StroboscopicFrame};
pub use sync::{cluster_partition, is_completely_synchronized, ClusterPartition, SyncVerdict};
pub use trials::{desync_trial, run_trial, summarize, DesyncSummary, TrialOutcome};

use crate::engine::ModelParams;

/// Default tolerance for counting visually distinct clusters.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

/// Phase and time tolerances used when comparing oscillators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub phase: f64,
    pub time: f64,
}

impl Tolerances {
    /// The same tolerance for phases and pending offsets.
    pub fn uniform(tol: f64) -> Self {
        Tolerances { phase: tol, time: tol }
    }
}

impl From<&ModelParams> for Tolerances {
    fn from(p: &ModelParams) -> Self {
        Tolerances { phase: p.tol_phase, time: p.tol_time }
    }
}
