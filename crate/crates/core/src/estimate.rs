//! Periodogram and the GPH log-periodogram estimate of the memory parameter.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::spectral::{dft, Direction};
use crate::stats::mean;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodogramResult {
    /// `λ_j = 2πj/T` for `j = 1..=⌊(T-1)/2⌋`.
    pub frequencies: Vec<f64>,
    pub ordinates: Vec<f64>,
}

impl PeriodogramResult {
    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }
}

/// `I(λ_j) = |Σ_t x_t e^{-iλ_j t}|² / (2πT)` after removing the sample mean.
pub fn periodogram(x: &[f64]) -> Result<PeriodogramResult> {
    periodogram_with(x, true)
}

pub fn periodogram_with(x: &[f64], demean: bool) -> Result<PeriodogramResult> {
    let t = x.len();
    if t < 4 {
        return Err(invalid(format!("periodogram needs at least 4 observations, got {t}")));
    }
    let mu = if demean { mean(x) } else { 0.0 };
    let buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v - mu, 0.0)).collect();
    let spec = dft(&buf, Direction::Forward)?;
    let n_freq = (t - 1) / 2;
    let norm = 1.0 / (2.0 * PI * t as f64);
    Ok(PeriodogramResult {
        frequencies: (1..=n_freq).map(|j| 2.0 * PI * j as f64 / t as f64).collect(),
        ordinates: spec[1..=n_freq].iter().map(|z| z.norm_sqr() * norm).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GphEstimate {
    pub d_hat: f64,
    /// Classical homoskedastic OLS standard error of `d_hat`.
    pub std_error: f64,
    pub bandwidth: usize,
}

pub fn default_bandwidth(t: usize) -> usize {
    (t as f64).sqrt().floor() as usize
}

/// Regress `log I(λ_j)` on `log λ_j` over `j = 1..=m`; `d̂ = -slope/2`.
pub fn gph_estimate(x: &[f64], bandwidth: Option<usize>) -> Result<GphEstimate> {
    let pg = periodogram(x)?;
    let m = bandwidth.unwrap_or_else(|| default_bandwidth(x.len()));
    gph_from_periodogram(&pg, m)
}

pub fn gph_from_periodogram(pg: &PeriodogramResult, m: usize) -> Result<GphEstimate> {
    if m < 3 {
        return Err(Error::DegenerateRegression(format!("bandwidth {m} leaves fewer than 3 points")));
    }
    if m > pg.len() {
        return Err(invalid(format!("bandwidth {m} exceeds the {} available ordinates", pg.len())));
    }
    let xs: Vec<f64> = pg.frequencies[..m].iter().map(|l| l.ln()).collect();
    let ys: Vec<f64> = pg.ordinates[..m].iter().map(|i| i.ln()).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(Error::DegenerateRegression("zero periodogram ordinate in the band".into()));
    }
    let mx = mean(&xs);
    let my = mean(&ys);
    let sxx: f64 = xs.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(u, v)| (u - mx) * (v - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(u, v)| (v - intercept - slope * u).powi(2)).sum();
    let slope_se = (rss / (m - 2) as f64 / sxx).sqrt();
    Ok(GphEstimate { d_hat: -slope / 2.0, std_error: slope_se / 2.0, bandwidth: m })
}
