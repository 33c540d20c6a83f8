//! Fixtures shared by the benchmarks.

use transord::{Distribution, EmpiricalDist, ParametricModel, SeedSpec};

/// Deterministic Weibull sample of size `n`.
pub fn weibull_sample(a: f64, n: usize, seed: u64) -> EmpiricalDist {
    ParametricModel::weibull(a)
        .and_then(|m| m.draw(n, SeedSpec::new(seed, 0)))
        .expect("valid benchmark fixture")
}
