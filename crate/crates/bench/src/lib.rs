//! Shared fixtures for the benchmarks.

use nonfrac_core::simulate::{gaussian_innovations, SeedSpec};
use nonfrac_core::CsaParams;

/// Series lengths timed by every generation benchmark.
pub const LENGTHS: [usize; 3] = [100, 1000, 10_000];

/// The CSA process used throughout, `d = 0.2`.
pub fn reference_csa() -> CsaParams {
    CsaParams::new(0.2, 1.6).expect("valid parameters")
}

/// Deterministic standard normal draws.
pub fn innovations(t: usize) -> Vec<f64> {
    gaussian_innovations(&mut SeedSpec::from(12_345).rng(), t, 1.0)
}
