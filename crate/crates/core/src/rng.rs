//! Deterministic RNG stream derivation.
//!
//! Every stochastic operation draws from a ChaCha stream derived from the
//! master seed plus a fixed role/index path, so results never depend on
//! evaluation order or thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream role tags used by the GA.
pub const STREAM_INIT: u64 = 0;
pub const STREAM_LIGHTS: u64 = 1;
pub const STREAM_PAIRING: u64 = 2;
pub const STREAM_MUTATE: u64 = 3;

/// splitmix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive an independent stream from `seed` and a role/index path.
pub fn derive(seed: u64, path: &[u64]) -> ChaCha8Rng {
    let mut h = mix64(seed);
    for &p in path {
        h = mix64(h ^ mix64(p));
    }
    ChaCha8Rng::seed_from_u64(h)
}
