use alloc::vec::Vec;

use crate::engine::NetworkState;
use crate::error::{Error, Result};

/// All phases at one firing of the reference oscillator.
#[derive(Debug, Clone, PartialEq)]
pub struct StroboscopicFrame {
    /// 1-based firing count of the reference since the run started.
    pub k: u64,
    pub t_k: f64,
    /// Sampled at the firing instant, before resets: the reference (and
    /// anything firing with it) reads 1.
    pub phases: Vec<f64>,
}

pub fn stroboscopic_run(state: &mut NetworkState, reference: usize, frames: usize) -> Result<Vec<StroboscopicFrame>> {
    let mut out = Vec::with_capacity(frames);
    stroboscopic_run_with(state, reference, frames, |frame, _| out.push(frame))?;
    Ok(out)
}

/// Calls `on_frame` with each frame and the state just after the firing
/// event (resets applied).
pub fn stroboscopic_run_with(
    state: &mut NetworkState,
    reference: usize,
    frames: usize,
    mut on_frame: impl FnMut(StroboscopicFrame, &NetworkState),
) -> Result<()> {
    if reference >= state.n() {
        return Err(Error::IndexOutOfRange { index: reference, len: state.n() });
    }
    let mut emitted = 0;
    while emitted < frames {
        let report = state.step()?;
        if report.fired.binary_search(&reference).is_err() {
            continue;
        }
        let mut phases = state.phases().to_vec();
        for &i in &report.fired {
            phases[i] = 1.0;
        }
        let frame = StroboscopicFrame {
            k: state.fire_log(reference).total(),
            t_k: report.event_time,
            phases,
        };
        on_frame(frame, state);
        emitted += 1;
    }
    Ok(())
}

/// Number of groups of phases separated by gaps larger than `tol`.
pub fn frame_cluster_count(phases: &[f64], tol: f64) -> usize {
    if phases.is_empty() {
        return 0;
    }
    let mut sorted = phases.to_vec();
    sorted.sort_by(f64::total_cmp);
    1 + sorted.windows(2).filter(|w| w[1] - w[0] > tol).count()
}

/// The cluster count if it is the same in each of the last `window` frames.
pub fn settled_cluster_count(frames: &[StroboscopicFrame], window: usize, tol: f64) -> Option<usize> {
    if window == 0 || frames.len() < window {
        return None;
    }
    let mut counts = frames[frames.len() - window..]
        .iter()
        .map(|f| frame_cluster_count(&f.phases, tol));
    let first = counts.next()?;
    counts.all(|c| c == first).then_some(first)
}
