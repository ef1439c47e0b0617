//! Deterministic random-number substreams.
//!
//! Every stochastic consumer in the simulator draws from its own substream,
//! derived from a single root seed and an integer label path. The derivation
//! is a fixed SplitMix64 absorption of the label words, so any (root, label)
//! pair maps to the same ChaCha8 stream on every run and every worker
//! layout. Distinct labels give statistically independent streams.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use crate::math::FloatExt;

/// Stream domain labels. The first word of every label path.
pub mod domain {
    /// Sum-of-sinusoids phase and angle draws.
    pub const FADING: u64 = 0x01;
    /// Markov state-sequence sampling.
    pub const STATES: u64 = 0x02;
    /// Payload bit generation.
    pub const BITS: u64 = 0x03;
    /// Additive thermal noise.
    pub const NOISE: u64 = 0x04;
    /// Hardware distortion.
    pub const DISTORTION: u64 = 0x05;
    /// Transition-matrix estimation error.
    pub const ESTIMATION: u64 = 0x06;
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a root seed and a label path into a substream seed.
///
/// s_0 = root; s_{i+1} = splitmix64(s_i + GAMMA * (word_i + 1)).
pub fn mix_seed(root: u64, label: &[u64]) -> u64 {
    let mut s = splitmix64(root ^ GOLDEN_GAMMA);
    for &w in label {
        s = splitmix64(s.wrapping_add(GOLDEN_GAMMA.wrapping_mul(w.wrapping_add(1))));
    }
    s
}

/// A deterministic substream of uniform, phase, and Gaussian variates.
#[derive(Clone, Debug)]
pub struct Substream {
    rng: ChaCha8Rng,
}

impl Substream {
    pub fn new(root: u64, label: &[u64]) -> Self {
        Substream {
            rng: ChaCha8Rng::seed_from_u64(mix_seed(root, label)),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on [0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on (0, 1].
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    /// Uniform phase on (0, 2 pi].
    #[inline]
    pub fn phase(&mut self) -> f64 {
        2.0 * core::f64::consts::PI * self.uniform_open()
    }

    /// Pair of independent standard normal variates (Box-Muller).
    #[inline]
    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform_open();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * core::f64::consts::PI * u2).sin_cos();
        (r * c, r * s)
    }

    /// Circularly symmetric complex Gaussian with total variance `var`.
    #[inline]
    pub fn complex_gaussian(&mut self, var: f64) -> Complex64 {
        let (re, im) = self.gaussian_pair();
        let s = (var * 0.5).sqrt();
        Complex64::new(re * s, im * s)
    }
}
