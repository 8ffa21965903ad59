//! Minimum mean-square-error forecasts of a CSA series from its own past.
//!
//! The observed values are inverted into innovations under a zero
//! pre-sample, then the MA filter is continued past the sample end.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{csa_ma_coeffs, CsaParams};
use crate::spectral::ConvolutionPlan;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastResult {
    pub horizon: usize,
    /// `point_forecasts[i - 1]` predicts the value `i` steps past the sample.
    pub point_forecasts: Vec<f64>,
    pub innovations: Vec<f64>,
    /// Weights `φ_0..φ_{T+h-1}` used for inversion and extrapolation.
    #[serde(skip)]
    weights: Vec<f64>,
}

impl ForecastResult {
    /// Largest absolute gap between `x` and the innovations pushed back
    /// through the filter.
    pub fn reconstruction_error(&self, x: &[f64]) -> f64 {
        let t = self.innovations.len();
        let rebuilt = ConvolutionPlan::new(&self.weights[..t]).apply(&self.innovations);
        rebuilt.iter().zip(x).map(|(r, v)| (r - v).abs()).fold(0.0, f64::max)
    }
}

/// Solve `x_t = Σ_{j ≤ t} w_j ν_{t-j}` for `ν` with `w_0 = 1`, by forward
/// substitution. `weights` must be at least as long as `x`.
pub fn recover_innovations_with(weights: &[f64], x: &[f64]) -> Vec<f64> {
    assert!(weights.len() >= x.len(), "need one weight per observation");
    let mut nu: Vec<f64> = Vec::with_capacity(x.len());
    for (t, &xt) in x.iter().enumerate() {
        let fitted: f64 = weights[1..=t].iter().zip(nu.iter().rev()).map(|(w, v)| w * v).sum();
        nu.push((xt - fitted) / weights[0]);
    }
    nu
}

pub fn recover_innovations(x: &[f64], p: CsaParams) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(invalid("series must have at least one observation"));
    }
    let phi = csa_ma_coeffs(p, x.len())?;
    Ok(recover_innovations_with(&phi.weights, x))
}

/// `x̂_{T-1+i} = Σ_{j=i}^{T-1+i} φ_j ν_{T-1+i-j}` for `i = 1..=h`.
pub fn forecast_csa(x: &[f64], p: CsaParams, h: usize) -> Result<ForecastResult> {
    let t = x.len();
    if t == 0 {
        return Err(invalid("series must have at least one observation"));
    }
    if h == 0 {
        return Err(invalid("forecast horizon must be at least 1"));
    }
    if h > t {
        return Err(invalid(format!("forecast horizon {h} exceeds the sample length {t}")));
    }
    let weights = csa_ma_coeffs(p, t + h)?.weights;
    let innovations = recover_innovations_with(&weights, x);
    let point_forecasts = (1..=h)
        .map(|i| innovations.iter().rev().zip(&weights[i..]).map(|(v, w)| v * w).sum())
        .collect();
    Ok(ForecastResult { horizon: h, point_forecasts, innovations, weights })
}
