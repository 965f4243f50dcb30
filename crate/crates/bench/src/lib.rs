//! Shared fixtures for the benchmark targets.

use subgrad::problems::random::Rng64;

/// Deterministic dense vector with standard-normal entries.
pub fn normal_vec(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = Rng64::seed(seed);
    (0..dim).map(|_| rng.normal()).collect()
}
