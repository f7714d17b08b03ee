//! Seeding rules. Every random stream in the crate is a ChaCha8 generator so
//! that a seed reproduces the same outputs on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Chain `c` of a run seeded with `seed` uses `seed ^ c`.
pub fn chain_seed(seed: u64, chain: usize) -> u64 {
    seed ^ chain as u64
}

/// Generator for a whole-corpus training chain.
pub fn training_rng(seed: u64, chain: usize) -> Rng {
    ChaCha8Rng::seed_from_u64(chain_seed(seed, chain))
}

/// Independent stream for one test document. Documents are sampled
/// independently at prediction time, so giving each its own stream keeps
/// results identical whatever the thread count.
pub fn document_rng(seed: u64, chain: usize, doc: usize, lane: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(chain_seed(seed, chain));
    rng.set_stream(((doc as u64) << 2) | (lane & 3));
    rng
}
