//! Deterministic seed derivation.
//!
//! Every random stream in a simulation is addressed by a tuple of integers
//! (master seed, SNR index, trial index, ...). Streams never depend on the
//! order in which work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a list of words into one 64-bit seed.
pub fn derive(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x5eed_u64, |acc, &w| splitmix64(acc ^ splitmix64(w)))
}

/// ChaCha8 stream for the given address.
pub fn rng_for(words: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(words))
}
