use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded uniform stream backing every random draw in the crate.
///
/// ChaCha8 keyed by the 64-bit seed; substream `k` selects ChaCha stream
/// number `k` under the same key, so substreams never overlap.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    pub fn substream(seed: u64, k: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(k);
        RngStream { seed, stream: k, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Exponential variable by inversion; infinite when `rate` is zero.
    pub fn exponential(&mut self, rate: f64) -> f64 {
        let u = self.uniform();
        if rate <= 0.0 {
            return f64::INFINITY;
        }
        -(1.0 - u).ln() / rate
    }
}
