use alloc::vec;
use alloc::vec::Vec;

use super::Tolerances;
use crate::engine::NetworkState;

/// Whether the whole network acts as one oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyncVerdict {
    pub synchronized: bool,
    /// `max - min` over all phases.
    pub phase_spread: f64,
    /// Some oscillator's in-flight pulses differ from oscillator 0's.
    pub pipeline_mismatch: bool,
}

/// Oscillators are synchronized from now on iff their phases are equal and
/// they have the same pulses in flight. Equal phases alone are not enough:
/// a pulse still in flight from only one of them separates them again.
///
/// Evaluate at an event boundary, after resets and scheduling.
pub fn is_completely_synchronized(state: &NetworkState, tol: Tolerances) -> SyncVerdict {
    let phase_spread = spread(state.phases());
    let phases_equal = phase_spread <= tol.phase;
    let offsets = offsets_by_source(state);
    let pipeline_mismatch = offsets[1..]
        .iter()
        .any(|o| !same_offsets(o, &offsets[0], tol.time));
    SyncVerdict {
        synchronized: phases_equal && !pipeline_mismatch,
        phase_spread,
        pipeline_mismatch,
    }
}

pub(crate) fn spread(phases: &[f64]) -> f64 {
    let (lo, hi) = phases
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| (lo.min(p), hi.max(p)));
    hi - lo
}

/// Pending offsets grouped by source; each list is ascending.
fn offsets_by_source(state: &NetworkState) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new(); state.n()];
    for spike in state.pipeline() {
        out[spike.source].push(spike.arrival_time - state.now());
    }
    out
}

fn same_offsets(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Oscillators grouped by equal phase and equal in-flight pulses.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterPartition {
    /// Each cluster ascending; clusters ordered by smallest member.
    pub clusters: Vec<Vec<usize>>,
    /// Phase of each cluster's smallest member.
    pub representative_phase: Vec<f64>,
}

impl ClusterPartition {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Index of the cluster holding `oscillator`.
    pub fn cluster_of(&self, oscillator: usize) -> Option<usize> {
        self.clusters.iter().position(|c| c.binary_search(&oscillator).is_ok())
    }
}

/// Partitions the network into clusters; each oscillator joins the first
/// cluster (by smallest member) whose representative it matches.
pub fn cluster_partition(state: &NetworkState, tol: Tolerances) -> ClusterPartition {
    let offsets = offsets_by_source(state);
    let phases = state.phases();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut representative_phase = Vec::new();
    for i in 0..state.n() {
        let found = clusters.iter().position(|c| {
            let r = c[0];
            (phases[i] - phases[r]).abs() <= tol.phase && same_offsets(&offsets[i], &offsets[r], tol.time)
        });
        match found {
            Some(k) => clusters[k].push(i),
            None => {
                clusters.push(vec![i]);
                representative_phase.push(phases[i]);
            }
        }
    }
    ClusterPartition { clusters, representative_phase }
}
