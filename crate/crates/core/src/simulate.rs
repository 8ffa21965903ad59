//! Sample-path generation.
//!
//! Both fast generators filter `T` Gaussian innovations through the first
//! `T` MA weights with one FFT convolution, using a zero pre-sample. The
//! naive generator aggregates `N` independent AR(1) units directly.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{csa_ma_coeffs, frac_ma_coeffs, CsaParams, FracParams, ProcessParams};
use crate::spectral::ConvolutionPlan;
use crate::stats::median;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    CsaFast,
    CsaNaive,
    FracFast,
}

/// RNG key plus stream id. Distinct stream ids give non-overlapping
/// ChaCha streams under the same key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSpec {
    pub seed: u64,
    pub stream: u64,
}

impl From<u64> for SeedSpec {
    fn from(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }
}

impl SeedSpec {
    /// Seed for replication `rep` of grid cell `cell` under `master_seed`.
    pub fn replication(master_seed: u64, cell: u32, rep: u32) -> Self {
        Self { seed: master_seed, stream: (u64::from(cell) << 32) | u64::from(rep) }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSample {
    pub values: Vec<f64>,
    pub generator: Generator,
    pub params: ProcessParams,
    pub seed: SeedSpec,
    /// Number of aggregated units; only set for the naive generator.
    pub n_units: Option<usize>,
}

impl SeriesSample {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_length(t: usize) -> Result<()> {
    if t == 0 {
        Err(invalid("series length must be at least 1"))
    } else {
        Ok(())
    }
}

/// `t` draws from `N(0, sigma²)`.
pub fn gaussian_innovations<R: Rng + ?Sized>(rng: &mut R, t: usize, sigma: f64) -> Vec<f64> {
    (0..t).map(|_| sigma * rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Filter given innovations through the CSA weights. The generator's
/// deterministic core; exposed for impulse-response and round-trip checks.
pub fn csa_fast_from_innovations(p: CsaParams, innovations: &[f64]) -> Result<Vec<f64>> {
    check_length(innovations.len())?;
    p.require_stationary()?;
    let phi = csa_ma_coeffs(p, innovations.len())?;
    Ok(ConvolutionPlan::new(&phi.weights).apply(innovations))
}

pub fn frac_fast_from_innovations(p: FracParams, innovations: &[f64]) -> Result<Vec<f64>> {
    check_length(innovations.len())?;
    let pi = frac_ma_coeffs(p, innovations.len())?;
    Ok(ConvolutionPlan::new(&pi.weights).apply(innovations))
}

pub fn generate_csa_fast(p: CsaParams, t: usize, seed: impl Into<SeedSpec>) -> Result<SeriesSample> {
    check_length(t)?;
    p.require_stationary()?;
    let seed = seed.into();
    let nu = gaussian_innovations(&mut seed.rng(), t, p.sigma_eps());
    Ok(SeriesSample {
        values: csa_fast_from_innovations(p, &nu)?,
        generator: Generator::CsaFast,
        params: p.into(),
        seed,
        n_units: None,
    })
}

pub fn generate_frac_fast(p: FracParams, t: usize, seed: impl Into<SeedSpec>) -> Result<SeriesSample> {
    check_length(t)?;
    let seed = seed.into();
    let eps = gaussian_innovations(&mut seed.rng(), t, 1.0);
    Ok(SeriesSample {
        values: frac_fast_from_innovations(p, &eps)?,
        generator: Generator::FracFast,
        params: p.into(),
        seed,
        n_units: None,
    })
}

/// Burn-in used when none is given: `max(2000, T)`.
pub fn default_burn_in(t: usize) -> usize {
    t.max(2000)
}

/// Aggregate `n_units` AR(1) units with `α_i² ~ Beta(a, b)`.
pub fn generate_csa_naive(
    p: CsaParams,
    t: usize,
    n_units: usize,
    burn_in: usize,
    seed: impl Into<SeedSpec>,
) -> Result<SeriesSample> {
    check_length(t)?;
    p.require_stationary()?;
    if n_units == 0 {
        return Err(invalid("number of units must be at least 1"));
    }
    let seed = seed.into();
    let mut rng = seed.rng();
    let beta = Beta::new(p.a(), p.b()).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let alphas: Vec<f64> = (0..n_units).map(|_| beta.sample(&mut rng).sqrt()).collect();
    let values = aggregate_ar1(&alphas, t, burn_in, p.sigma_eps(), &mut rng);
    Ok(SeriesSample {
        values,
        generator: Generator::CsaNaive,
        params: p.into(),
        seed,
        n_units: Some(n_units),
    })
}

/// Aggregate AR(1) units with the given coefficients, run from zero for
/// `burn_in + t` steps, scaled by `1/√N`.
pub fn aggregate_ar1<R: Rng + ?Sized>(
    alphas: &[f64],
    t: usize,
    burn_in: usize,
    sigma: f64,
    rng: &mut R,
) -> Vec<f64> {
    let scale = 1.0 / (alphas.len() as f64).sqrt();
    let mut state = vec![0.0f64; alphas.len()];
    let mut out = Vec::with_capacity(t);
    for step in 0..burn_in + t {
        let mut total = 0.0;
        for (x, &alpha) in state.iter_mut().zip(alphas) {
            *x = alpha * *x + sigma * rng.sample::<f64, _>(StandardNormal);
            total += *x;
        }
        if step >= burn_in {
            out.push(total * scale);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub length: usize,
    pub n_units: usize,
    pub fast_seconds: f64,
    pub naive_seconds: f64,
    pub speedup: f64,
}

/// Median wall-clock time of fast versus naive generation at each length,
/// with `N = n_units_rule(T)` and the default burn-in.
pub fn benchmark_generation(
    p: CsaParams,
    sizes: &[usize],
    n_units_rule: impl Fn(usize) -> usize,
    runs: usize,
) -> Result<Vec<TimingRow>> {
    if sizes.is_empty() {
        return Err(invalid("benchmark needs at least one length"));
    }
    p.require_stationary()?;
    let runs = runs.max(1);
    sizes
        .iter()
        .map(|&t| {
            let n = n_units_rule(t);
            let fast = time_runs(runs, |r| generate_csa_fast(p, t, r).map(drop))?;
            let naive = time_runs(runs, |r| generate_csa_naive(p, t, n, default_burn_in(t), r).map(drop))?;
            Ok(TimingRow { length: t, n_units: n, fast_seconds: fast, naive_seconds: naive, speedup: naive / fast })
        })
        .collect()
}

fn time_runs(runs: usize, mut f: impl FnMut(u64) -> Result<()>) -> Result<f64> {
    let mut times = Vec::with_capacity(runs);
    for r in 0..runs {
        let start = Instant::now();
        f(r as u64)?;
        times.push(start.elapsed().as_secs_f64().max(1e-9));
    }
    Ok(median(&times))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{acf_csa_lags, acf_frac_lags, csa_variance};
    use crate::stats::{mean, sample_acf, sd};

    fn impulse(t: usize) -> Vec<f64> {
        let mut v = vec![0.0; t];
        v[0] = 1.0;
        v
    }

    /// `E[Σ_{s<T-k} x_s x_{s+k}]` under a zero pre-sample:
    /// `Σ_s Σ_{j ≤ s} φ_j φ_{j+k}`.
    fn expected_cross_products(weights: &[f64], max_lag: usize) -> Vec<f64> {
        let t = weights.len();
        (0..=max_lag)
            .map(|k| {
                let mut running = 0.0;
                let mut total = 0.0;
                for s in 0..t - k {
                    running += weights[s] * weights[s + k];
                    total += running;
                }
                total
            })
            .collect()
    }

    fn cross_products(x: &[f64], max_lag: usize) -> Vec<f64> {
        (0..=max_lag).map(|k| x[..x.len() - k].iter().zip(&x[k..]).map(|(u, v)| u * v).sum()).collect()
    }

    #[test]
    fn seeds_are_deterministic_and_streams_distinct() {
        let p = CsaParams::new(0.2, 1.6).unwrap();
        let a = generate_csa_fast(p, 256, 7).unwrap();
        let b = generate_csa_fast(p, 256, 7).unwrap();
        assert_eq!(a.values, b.values);
        let c = generate_csa_fast(p, 256, SeedSpec::replication(7, 0, 1)).unwrap();
        assert_ne!(a.values, c.values);
        let n1 = generate_csa_naive(p, 64, 10, 50, 3).unwrap();
        let n2 = generate_csa_naive(p, 64, 10, 50, 3).unwrap();
        assert_eq!(n1.values, n2.values);
        assert_eq!(n1.n_units, Some(10));
    }

    #[test]
    fn impulse_responses() {
        let p = CsaParams::new(0.2, 1.6).unwrap();
        let out = csa_fast_from_innovations(p, &impulse(128)).unwrap();
        let phi = csa_ma_coeffs(p, 128).unwrap().weights;
        for (o, w) in out.iter().zip(&phi) {
            assert!((o - w).abs() < 1e-12);
        }
        let f = FracParams::new(0.3).unwrap();
        let out = frac_fast_from_innovations(f, &impulse(100)).unwrap();
        let pi = frac_ma_coeffs(f, 100).unwrap().weights;
        for (o, w) in out.iter().zip(&pi) {
            assert!((o - w).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_memory_frac_is_identity() {
        let f = FracParams::new(0.0).unwrap();
        let s = generate_frac_fast(f, 300, 9).unwrap();
        let eps = gaussian_innovations(&mut SeedSpec::from(9).rng(), 300, 1.0);
        for (o, e) in s.values.iter().zip(&eps) {
            assert!((o - e).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = CsaParams::new(0.2, 1.6).unwrap();
        assert!(generate_csa_fast(p, 0, 1).is_err());
        assert!(generate_csa_naive(p, 10, 0, 0, 1).is_err());
        assert!(generate_csa_fast(CsaParams::new(0.2, 0.5).unwrap(), 10, 1).is_err());
        assert!(benchmark_generation(p, &[], |t| t, 1).is_err());
    }

    #[test]
    fn degenerate_units_give_white_noise() {
        let mut rng = SeedSpec::from(21).rng();
        let x = aggregate_ar1(&[0.0], 4000, 0, 1.0, &mut rng);
        let r1 = sample_acf(&x, 1, false)[1];
        assert!(r1.abs() < 3.0 / (4000f64).sqrt(), "{r1}");
    }

    #[test]
    fn fast_csa_second_moments_follow_weights() {
        let p = CsaParams::new(0.2, 1.6).unwrap();
        let t = 512;
        let reps = 400;
        let max_lag = 10;
        let expected = expected_cross_products(&csa_ma_coeffs(p, t).unwrap().weights, max_lag);
        let rows: Vec<Vec<f64>> = (0..reps)
            .map(|r| cross_products(&generate_csa_fast(p, t, SeedSpec::replication(5, 0, r)).unwrap().values, max_lag))
            .collect();
        for k in 0..=max_lag {
            let col: Vec<f64> = rows.iter().map(|a| a[k]).collect();
            let se = sd(&col).unwrap() / (reps as f64).sqrt();
            assert!((mean(&col) - expected[k]).abs() < 3.0 * se, "lag {k}: {} vs {}", mean(&col), expected[k]);
        }
    }

    #[test]
    fn fast_frac_second_moments_follow_weights() {
        let f = FracParams::new(0.25).unwrap();
        let t = 1024;
        let reps = 300;
        let expected = expected_cross_products(&frac_ma_coeffs(f, t).unwrap().weights, 5);
        let closed = acf_frac_lags(f, 5);
        let rows: Vec<Vec<f64>> = (0..reps)
            .map(|r| cross_products(&generate_frac_fast(f, t, SeedSpec::replication(8, 0, r)).unwrap().values, 5))
            .collect();
        for k in 0..=5 {
            let col: Vec<f64> = rows.iter().map(|a| a[k]).collect();
            let se = sd(&col).unwrap() / (reps as f64).sqrt();
            assert!((mean(&col) - expected[k]).abs() < 3.0 * se, "lag {k}");
            // truncation only shaves the finite-sample autocorrelation slightly
            assert!((expected[k] / expected[0] - closed[k]).abs() < 0.05);
        }
    }

    #[test]
    fn naive_aggregation_matches_closed_form_acf() {
        let p = CsaParams::new(0.2, 1.6).unwrap();
        let closed = acf_csa_lags(p, 5).unwrap();
        let reps = 40;
        let acfs: Vec<Vec<f64>> = (0..reps)
            .map(|r| sample_acf(&generate_csa_naive(p, 1000, 500, 2000, SeedSpec::replication(2, 0, r)).unwrap().values, 5, false))
            .collect();
        for k in 1..=5 {
            let col: Vec<f64> = acfs.iter().map(|a| a[k]).collect();
            let se = sd(&col).unwrap() / (reps as f64).sqrt();
            assert!((mean(&col) - closed[k]).abs() < 4.0 * se, "lag {k}: {} vs {}", mean(&col), closed[k]);
        }
    }

    #[test]
    fn fast_csa_variance() {
        let p = CsaParams::new(1.0, 2.0).unwrap();
        let t = 1000;
        let reps = 1000;
        let v = csa_variance(p).unwrap();
        let phi = csa_ma_coeffs(p, t).unwrap().weights;
        // Type II: E[x_s²] = Σ_{j ≤ s} φ_j²
        let mut acc = 0.0;
        let expected: f64 = phi.iter().map(|w| { acc += w * w; acc }).sum::<f64>() / t as f64;
        assert!(expected < v);
        let vars: Vec<f64> = (0..reps)
            .map(|r| {
                let x = generate_csa_fast(p, t, SeedSpec::replication(4, 0, r)).unwrap().values;
                x.iter().map(|v| v * v).sum::<f64>() / t as f64
            })
            .collect();
        let se = sd(&vars).unwrap() / (reps as f64).sqrt();
        assert!((mean(&vars) - expected).abs() < 3.0 * se);
        assert!((mean(&vars) - v).abs() < 0.05 * v);
    }

    #[test]
    fn benchmark_smoke() {
        let p = CsaParams::new(0.2, 1.6).unwrap();
        let rows = benchmark_generation(p, &[16], |t| t, 5).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].fast_seconds > 0.0 && rows[0].naive_seconds > 0.0);
    }
}
