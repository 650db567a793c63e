//! Per-trial random streams.
//!
//! Each stream is a ChaCha8 generator keyed by `seed` (expanded through
//! `SeedableRng::seed_from_u64`) with the ChaCha stream word set to
//! `stream_id`. Streams with different ids never overlap, and a given
//! `(seed, stream_id)` produces the same sequence on every platform.
//!
//! Uniforms are built from the top 53 bits of a `u64` as `(k + 0.5)·2⁻⁵³`,
//! so they lie strictly inside (0, 1). Complex Gaussians use the polar
//! Box–Muller form `√(−ln u₁)·e^{j2πu₂}`, giving unit total variance.

use core::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on the open interval (0, 1).
    pub fn next_open_uniform(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.next_u64() >> 11) as f64 + 0.5) * SCALE
    }

    /// Circularly-symmetric complex Gaussian, zero mean, `E|z|² = 1`.
    pub fn next_cgaussian(&mut self) -> Complex64 {
        let u1 = self.next_open_uniform();
        let u2 = self.next_open_uniform();
        let r = libm::sqrt(-libm::log(u1));
        let (sin, cos) = libm::sincos(2.0 * PI * u2);
        Complex64::new(r * cos, r * sin)
    }
}
