//! Deterministic random numbers.
//!
//! Every random choice in the crate goes through [`SeededRng`], which is
//! ChaCha8 (the `rand_chacha` 0.10 stream) seeded with a 64-bit seed via
//! `SeedableRng::seed_from_u64`. The mappings from raw `u64` words to
//! floats, bounded integers and Gaussians are implemented here so that
//! results do not depend on distribution code in other crates.
//! Generator version tag: `chacha8-v1`.

use rand_chacha::ChaCha8Rng;
use rand_core::{Rng, SeedableRng};

pub const GENERATOR_NAME: &str = "chacha8-v1";

#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)`, unbiased (Lemire's method).
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "bound must be positive");
        let bound = bound as u64;
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            let wide = (x as u128) * (bound as u128);
            if (wide as u64) >= threshold {
                return (wide >> 64) as usize;
            }
        }
    }

    /// Standard normal deviate (Box–Muller, one output per call).
    pub fn gaussian(&mut self) -> f64 {
        // 1 - uniform() lies in (0, 1], so the log is finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// `m` distinct indices from `0..n`, drawn by a partial Fisher–Yates
    /// shuffle. The output order is the draw order.
    pub fn sample_indices(&mut self, n: usize, m: usize) -> Vec<usize> {
        assert!(m <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for t in 0..m {
            let j = t + self.below(n - t);
            pool.swap(t, j);
        }
        pool.truncate(m);
        pool
    }
}

/// SplitMix64 finalizer; derives independent child seeds.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
