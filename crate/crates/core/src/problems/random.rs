//! Deterministic random generation for problem instances and noise.
//!
//! Instances must be reproducible bit-for-bit across runs and rebuildable in
//! other languages, so the generator and the sampling recipes are fixed and
//! documented rather than delegated to a distribution library:
//!
//! - stream: ChaCha8 keyed with the little-endian 64-bit seed in the first
//!   word of the key (remaining key/nonce bytes zero),
//! - uniform in [0, 1): `(next_u64 >> 11) * 2^-53`,
//! - standard normal: Box–Muller, `sqrt(-2 ln u1) * cos(2 pi u2)` with
//!   `u1` nudged into (0, 1]; each draw consumes exactly two uniforms.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct Rng64 {
    inner: ChaCha8Rng,
}

impl Rng64 {
    pub fn seed(seed: u64) -> Self {
        Rng64 { inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal draw (Box–Muller, cosine branch).
    pub fn normal(&mut self) -> f64 {
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniformly random direction on the unit sphere.
    pub fn unit_vector(&mut self, dim: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| self.normal()).collect();
            let norm = crate::linalg::norm2(&v);
            if norm > 1e-12 {
                return v.iter().map(|x| x / norm).collect();
            }
        }
    }
}

/// FNV-1a over the IEEE-754 bit patterns of a point, used to derive a
/// per-point stream for the deterministic noise oracle.
pub fn hash_point(x: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in x {
        for byte in v.to_bits().to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

/// Deterministic perturbation of norm exactly `radius` in a direction that
/// depends only on `(seed, x)`, so the wrapped oracle stays a pure function.
pub fn noise_at_point(seed: u64, x: &[f64], radius: f64) -> Vec<f64> {
    if radius == 0.0 {
        return vec![0.0; x.len()];
    }
    let mut rng = Rng64::seed(seed ^ hash_point(x));
    let mut dir = rng.unit_vector(x.len());
    for d in &mut dir {
        *d *= radius;
    }
    dir
}
