//! Seed derivation for independent, individually reproducible trials.
//!
//! Trial `k` under master seed `s` uses `splitmix64(s + k * 0x9E3779B97F4A7C15)`,
//! so any single trial can be rerun without replaying the ones before it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `k` of a run started from `master`.
pub fn derive_seed(master: u64, k: u64) -> u64 {
    splitmix64(master.wrapping_add(k.wrapping_mul(GOLDEN_GAMMA)))
}

/// The random stream every sampling call in this crate consumes.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
