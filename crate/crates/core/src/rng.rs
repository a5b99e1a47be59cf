//! Counter-based random streams.
//!
//! Trajectory `i` of a run with master seed `s` draws from ChaCha8 keyed by
//! `seed_from_u64(s)` on stream `i`. Uniform doubles take the top 53 bits of
//! each `u64` output, so any ChaCha8 implementation reproduces the draws.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Recorded in every output header.
pub const GENERATOR_NAME: &str =
    "ChaCha8 (rand_chacha 0.9; key = seed_from_u64(master_seed), stream = trajectory index, f64 = (u64 >> 11) * 2^-53)";

#[derive(Debug, Clone)]
pub struct Stream(ChaCha8Rng);

impl Stream {
    pub fn new(master_seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(index);
        Self(rng)
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}
