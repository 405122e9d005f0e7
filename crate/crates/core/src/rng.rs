//! Seeded random streams.
//!
//! Every random draw in a trial derives from the trial seed. Independent
//! consumers (workload generation, algorithm sampling) read disjoint ChaCha
//! streams of the same key, so replay is bit-exact and adding draws in one
//! consumer never perturbs another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

/// Stream used by workload generators.
pub const WORKLOAD_STREAM: u64 = 1;
/// Stream used by the randomized algorithms.
pub const ALGORITHM_STREAM: u64 = 2;

pub fn stream(seed: u64, stream: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
