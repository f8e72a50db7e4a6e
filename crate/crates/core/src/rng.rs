//! Seeded random streams.
//!
//! Every stochastic step draws from its own ChaCha8 stream derived from the
//! run seed, so adding randomness in one stage never shifts another.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Stream ids used across the crate.
pub mod stream {
    pub const SPLIT: u64 = 1;
    pub const TRAIN_NEGATIVES: u64 = 2;
    pub const TEST_NEGATIVES: u64 = 3;
    pub const SHUFFLE: u64 = 4;
    pub const LOUVAIN: u64 = 5;
    pub const INIT: u64 = 6;
    pub const DROPOUT: u64 = 7;
    pub const VALIDATION: u64 = 8;
    pub const RANDOM_BASELINE: u64 = 9;
    pub const ATTRIBUTES: u64 = 10;
}

pub fn seeded(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
