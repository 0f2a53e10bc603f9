//! Seeded, replayable random streams for the samplers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A deterministic random stream. Identical seeds replay identical trajectories.
///
/// Backed by ChaCha8, a counter-based generator; `draws` counts the values taken
/// so far and is reported alongside experiment output.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    draws: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, draws: 0, inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A stream for the `index`-th independent replica of an experiment seeded with `seed`.
    pub fn replica(seed: u64, index: u64) -> Self {
        let mut stream = Self::new(seed);
        stream.inner.set_stream(index);
        stream
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Uniform integer in `0..bound`.
    pub fn below(&mut self, bound: usize) -> usize {
        self.draws += 1;
        self.inner.gen_range(0..bound)
    }

    pub fn coin(&mut self) -> bool {
        self.draws += 1;
        self.inner.gen::<bool>()
    }

    /// Uniform real in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.draws += 1;
        self.inner.gen_range(lo..hi)
    }
}
