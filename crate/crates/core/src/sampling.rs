//! Deterministic random sources for test points.
//!
//! Each draw in a census gets its own generator seeded from `(seed, index)`,
//! so results do not depend on how draws are distributed across threads.

use libm::{cos, log, sin, sqrt};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::su2::{Alg, Su2};

/// SplitMix64 finalizer; decorrelates consecutive indices.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub struct Rng {
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self { inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Generator for draw `index` of a run seeded with `seed`.
    pub fn for_draw(seed: u64, index: u64) -> Self {
        Self::new(sub_seed(seed, index))
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.inner.next_u64() % n as u64) as usize
    }

    /// Standard normal via Box–Muller.
    pub fn gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        sqrt(-2.0 * log(u1)) * cos(core::f64::consts::TAU * u2)
    }

    pub fn gaussian_alg(&mut self) -> Alg {
        Alg::new(self.gaussian(), self.gaussian(), self.gaussian())
    }

    pub fn unit_vector(&mut self) -> Alg {
        loop {
            let v = self.gaussian_alg();
            let n = v.norm();
            if n > 1e-6 {
                return v.scale(1.0 / n);
            }
        }
    }

    /// Haar-distributed element: a normalized 4-dimensional Gaussian.
    pub fn haar_su2(&mut self) -> Su2 {
        loop {
            let q = [self.gaussian(), self.gaussian(), self.gaussian(), self.gaussian()];
            if let Ok(a) = Su2::from_array(q) {
                return a;
            }
        }
    }

    /// `exp(theta * axis)` with `theta` uniform in `[0, 2 pi)`.
    pub fn torus_element(&mut self, axis: Alg) -> Su2 {
        let theta = self.uniform_in(0.0, core::f64::consts::TAU);
        Su2::new(cos(theta), sin(theta) * axis.0[0], sin(theta) * axis.0[1], sin(theta) * axis.0[2])
            .expect("unit axis")
    }
}
