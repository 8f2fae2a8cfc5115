//! Event-driven simulation of all-to-all pulse-coupled oscillators whose
//! excitatory pulses arrive after a fixed transmission delay.
//!
//! The crate is `no_std` (it needs `alloc`). It is split into three layers:
//!
//! * [`phase`]: the concave phase-to-state curve, its inverse and the jump
//!   map `F_m` applied when `m` pulses arrive together.
//! * [`engine`]: a deterministic event engine (drift, grouped arrivals,
//!   threshold firings, delayed pulse scheduling).
//! * [`analysis`]: synchronization detection, cluster partitioning, run
//!   audits, the two-clique return map and stroboscopic sampling.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod engine;
mod error;
pub mod phase;

pub use error::{Error, Result};
pub use engine::{FireLog, FireLogRetention, ModelParams, NetworkState, PendingSpike, StepReport};
pub use phase::{validate_assumptions, AssumptionReport, CouplingParams, CurveSpec};
