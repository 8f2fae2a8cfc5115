//! Seeded initial-phase draws.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with the
//! config's 64-bit seed via `seed_from_u64`. Trial `k` of a batch reads from
//! stream `k`, so trials are independent of scheduling order. A draw takes
//! the top 53 bits of `next_u64` as `u` in `[0, 1)` and returns
//! `high - u * (high - low)`, which lies in `(low, high]`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::config::InitSpec;

const UNIT: f64 = 1.0 / (1u64 << 53) as f64;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One draw on `(low, high]`.
pub fn upper_inclusive(rng: &mut impl RngCore, low: f64, high: f64) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 * UNIT;
    high - u * (high - low)
}

pub fn initial_phases(init: &InitSpec, n: usize, seed: u64, trial: u64) -> Vec<f64> {
    match init {
        InitSpec::Explicit(phases) => phases.clone(),
        InitSpec::Uniform { low, high } => {
            let mut rng = trial_rng(seed, trial);
            (0..n).map(|_| upper_inclusive(&mut rng, *low, *high)).collect()
        }
    }
}
