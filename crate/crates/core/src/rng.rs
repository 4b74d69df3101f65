//! Seed handling: every randomized routine takes a `u64` seed and derives
//! per-round or per-task ChaCha streams from it, so runs are reproducible and
//! independent of thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic stream for a seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mix a task index into a seed (splitmix64 finalizer), giving decorrelated
/// per-task streams that do not depend on evaluation order.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
