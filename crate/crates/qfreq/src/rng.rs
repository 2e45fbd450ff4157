//! Seed derivation for reproducible multi-trial experiments.
//!
//! Per-trial seeds are derived from the master seed with SplitMix64, the fixed
//! 64-bit mixing function documented here: `trial_seed(master, i)` feeds
//! `master ⊕ (i+1)·0x9E3779B97F4A7C15` through one SplitMix64 finalization.
//! Trial generators are ChaCha8, seeded from that value, so every charged count
//! and estimate is bit-for-bit reproducible from `(master_seed, trial_index)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One SplitMix64 finalization step.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `index` of an experiment with the given master seed.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ index.wrapping_add(1).wrapping_mul(GAMMA))
}

/// Deterministic generator for one trial.
pub fn trial_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(master, index))
}

/// Generator seeded directly, for single-shot uses.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
