//! Seeded random streams.
//!
//! Every stochastic step draws from [`SimRng`] (ChaCha with 8 rounds,
//! keyed through `SeedableRng::seed_from_u64`). Both the cipher and the
//! seed expansion are fixed algorithms, so a seed reproduces the same
//! trace on every platform.
//!
//! Child seeds come from [`derive_seed`], a SplitMix64 chain over the
//! parent seed and an arbitrary list of indices.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `derive_seed(s, &[a, b])` = `mix(mix(mix(s) ^ a) ^ b)` with `mix` the
/// SplitMix64 finalizer.
pub fn derive_seed(master: u64, indices: &[u64]) -> u64 {
    indices
        .iter()
        .fold(splitmix64(master), |acc, &i| splitmix64(acc ^ i))
}
