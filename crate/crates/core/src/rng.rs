//! Seedable random streams used by every chain.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator behind every chain and kernel.
pub type ChainRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ChainRng {
    ChainRng::seed_from_u64(seed)
}

/// Derives the seed of stream `index` from a master seed (SplitMix64 finalizer
/// over the combined value).
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
