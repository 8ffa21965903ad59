//! Population fits of misspecified models to a CSA process and the
//! resulting one-step forecast error variances relative to the optimum.
//!
//! All quantities are computed from the closed-form autocorrelations; no
//! data are involved.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{acf_csa_lags, acf_frac_lags, csa_variance, CsaParams, FracParams};
use crate::specfun::{hypergeometric_pfq, ln_gamma_pos, log_gamma_signed, PfqSpec, DEFAULT_PFQ_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    ArP,
    PureFrac,
    Arfima1d0,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyReport {
    pub model: ModelKind,
    /// AR coefficients for `ArP`, `[α_I]` for `Arfima1d0`, empty for `PureFrac`.
    pub fitted_params: Vec<f64>,
    /// One-step forecast error variance relative to the optimal forecast.
    pub zeta: f64,
    pub csa: CsaParams,
}

/// Solve the Yule-Walker equations `R α = r` for autocorrelations
/// `acf[0..=order]` by Levinson-Durbin.
pub fn levinson_durbin(acf: &[f64], order: usize) -> Result<Vec<f64>> {
    if order == 0 || acf.len() <= order {
        return Err(Error::InvalidParameter(format!(
            "need autocorrelations up to lag {order}, got {} values",
            acf.len()
        )));
    }
    let mut coeffs = vec![0.0; order];
    let mut prev = vec![0.0; order];
    let mut err = acf[0];
    for m in 0..order {
        let num = acf[m + 1] - (0..m).map(|j| coeffs[j] * acf[m - j]).sum::<f64>();
        let reflection = num / err;
        prev[..m].copy_from_slice(&coeffs[..m]);
        for j in 0..m {
            coeffs[j] = prev[j] - reflection * prev[m - 1 - j];
        }
        coeffs[m] = reflection;
        err *= 1.0 - reflection * reflection;
        if !(err > 1e-14 * acf[0]) {
            return Err(Error::Singular(format!("Toeplitz system of order {} is not positive definite", m + 1)));
        }
    }
    Ok(coeffs)
}

/// Population AR(`order`) coefficients for `CSA(a, b)`.
pub fn fit_ar_population(p: CsaParams, order: usize) -> Result<Vec<f64>> {
    if order == 0 {
        return Err(Error::InvalidParameter("AR order must be at least 1".into()));
    }
    let acf = acf_csa_lags(p, order)?;
    if order == 1 {
        return Ok(vec![acf[1]]);
    }
    levinson_durbin(&acf, order)
}

/// `V [(1 + Σ α_i²) + 2 Σ_i γ(i)(-α_i + Σ_j α_j α_{j+i})]` with
/// `V = B(a, b-1)/B(a, b)`, the variance in units of `σ²`.
pub fn zeta_ar(p: CsaParams, coeffs: &[f64]) -> Result<f64> {
    let order = coeffs.len();
    let acf = acf_csa_lags(p, order.max(1))?;
    let scale = csa_variance(p)? / p.sigma_eps().powi(2);
    let own: f64 = 1.0 + coeffs.iter().map(|c| c * c).sum::<f64>();
    let cross: f64 = (1..=order)
        .map(|i| {
            let lagged: f64 = (0..order - i).map(|j| coeffs[j] * coeffs[j + i]).sum();
            acf[i] * (-coeffs[i - 1] + lagged)
        })
        .sum();
    Ok(scale * (own + 2.0 * cross))
}

/// Fit and score an AR(`order`) approximation.
pub fn ar_report(p: CsaParams, order: usize) -> Result<EfficiencyReport> {
    let coeffs = fit_ar_population(p, order)?;
    let zeta = zeta_ar(p, &coeffs)?;
    Ok(EfficiencyReport { model: ModelKind::ArP, fitted_params: coeffs, zeta, csa: p })
}

/// `(1 - γ(1)²) B(a, b-1)/B(a, b)`, the AR(1) loss without the general formula.
pub fn zeta_ar1(p: CsaParams) -> Result<f64> {
    let rho = acf_csa_lags(p, 1)?[1];
    Ok(csa_variance(p)? / p.sigma_eps().powi(2) * (1.0 - rho * rho))
}

fn require_long_memory(p: CsaParams) -> Result<f64> {
    let b = p.b();
    if !(b > 1.0 && b < 2.0) {
        return Err(Error::Domain(format!("fractional fits need b in (1, 2), got {b}")));
    }
    Ok(p.memory())
}

fn pfq(num: [f64; 4], den: [f64; 3]) -> Result<f64> {
    hypergeometric_pfq(&PfqSpec::at_unity(num.to_vec(), den.to_vec())?, DEFAULT_PFQ_TOL)
}

/// Autocovariance at lag `k` of the CSA process after `(1 - L)^d` with
/// `d = 1 - b/2`, i.e. the residual of the pure fractional model.
pub fn gamma_z(p: CsaParams, k: usize) -> Result<f64> {
    let d = require_long_memory(p)?;
    let (a, b) = (p.a(), p.b());
    let kf = k as f64;

    // Γ(1+2d) / (Γ(-d) Γ(1+d)) · Γ(-d-k) / Γ(1+d-k), signs tracked separately
    let (lg_neg_d, s_neg_d) = log_gamma_signed(-d)?;
    let (lg_num, s_num) = log_gamma_signed(-d - kf)?;
    let (lg_den, s_den) = log_gamma_signed(1.0 + d - kf)?;
    let log_mag = ln_gamma_pos(1.0 + 2.0 * d) - lg_neg_d - ln_gamma_pos(1.0 + d) + lg_num - lg_den;
    let base = s_neg_d * s_num * s_den * log_mag.exp() * p.sigma_eps().powi(2);

    let f1 = pfq(
        [1.0, a, (1.0 - d + kf) / 2.0, (-d + kf) / 2.0],
        [a + b - 1.0, (2.0 + d + kf) / 2.0, (1.0 + d + kf) / 2.0],
    )? + pfq(
        [1.0, a, (1.0 - d - kf) / 2.0, (-d - kf) / 2.0],
        [a + b - 1.0, (2.0 + d - kf) / 2.0, (1.0 + d - kf) / 2.0],
    )?;
    let f2 = (-d + kf) / (1.0 + d + kf)
        * pfq(
            [1.0, a + 0.5, (1.0 - d + kf) / 2.0, (2.0 - d + kf) / 2.0],
            [a + b - 0.5, (2.0 + d + kf) / 2.0, (3.0 + d + kf) / 2.0],
        )?
        + (-d - kf) / (1.0 + d - kf)
            * pfq(
                [1.0, a + 0.5, (1.0 - d - kf) / 2.0, (2.0 - d - kf) / 2.0],
                [a + b - 0.5, (2.0 + d - kf) / 2.0, (3.0 + d - kf) / 2.0],
            )?;

    // B(a, b-1)/B(a, b) and B(a+1/2, b-1)/B(a, b)
    let lb_ab = ln_gamma_pos(a) + ln_gamma_pos(b) - ln_gamma_pos(a + b);
    let r1 = (ln_gamma_pos(a) + ln_gamma_pos(b - 1.0) - ln_gamma_pos(a + b - 1.0) - lb_ab).exp();
    let r2 = (ln_gamma_pos(a + 0.5) + ln_gamma_pos(b - 1.0) - ln_gamma_pos(a + b - 0.5) - lb_ab).exp();
    Ok(base * (r1 * (f1 - 1.0) + r2 * f2))
}

/// Pure `I(d)` and `ARFIMA(1, d, 0)` reports, in that order.
///
/// The ARFIMA loss is the residual variance after an AR(1) on the
/// differenced series, `γ_z(0)(1 - α_I²)`.
pub fn zeta_fractional(p: CsaParams) -> Result<(EfficiencyReport, EfficiencyReport)> {
    let g0 = gamma_z(p, 0)?;
    let g1 = gamma_z(p, 1)?;
    let sigma2 = p.sigma_eps().powi(2);
    let alpha = g1 / g0;
    let pure = EfficiencyReport { model: ModelKind::PureFrac, fitted_params: vec![], zeta: g0 / sigma2, csa: p };
    let arfima = EfficiencyReport {
        model: ModelKind::Arfima1d0,
        fitted_params: vec![alpha],
        zeta: g0 * (1.0 - alpha * alpha) / sigma2,
        csa: p,
    };
    Ok((pure, arfima))
}

/// `(γ_z(0)² - γ_z(1)²) / γ_z(0)²`, the scale-free variant. Kept for
/// comparison; it equals `1 - α_I²` and never exceeds one.
pub fn zeta_arfima_scale_free(p: CsaParams) -> Result<f64> {
    let g0 = gamma_z(p, 0)?;
    let g1 = gamma_z(p, 1)?;
    Ok((g0 * g0 - g1 * g1) / (g0 * g0))
}

fn require_positive_memory(d: f64) -> Result<()> {
    if !(d > 0.0 && d < 0.5) {
        return Err(Error::InvalidParameter(format!("d must lie in (0, 1/2), got {d}")));
    }
    Ok(())
}

/// `Σ_{i=0}^{k} (γ_{I(d)}(i) - γ_{CSA(a, 2(1-d))}(i))²`.
pub fn approximation_loss(k: usize, a: f64, d: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("lag count must be at least 1".into()));
    }
    require_positive_memory(d)?;
    let frac = acf_frac_lags(FracParams::new(d)?, k);
    let csa = acf_csa_lags(CsaParams::matching_memory(a, d)?, k)?;
    Ok(frac.iter().zip(&csa).map(|(u, v)| (u - v).powi(2)).sum())
}

/// Upper end of the search interval for [`best_matching_a`].
pub const MATCH_A_MAX: f64 = 5.0;
const MATCH_GRID: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub a_star: f64,
    pub loss: f64,
}

/// Minimise [`approximation_loss`] over `a ∈ (0, 5]`: a 100-point grid to
/// bracket the minimum, then golden-section search.
pub fn best_matching_a(k: usize, d: f64) -> Result<MatchResult> {
    let step = MATCH_A_MAX / MATCH_GRID as f64;
    let grid: Vec<(f64, f64)> = (1..=MATCH_GRID)
        .map(|i| {
            let a = step * i as f64;
            approximation_loss(k, a, d).map(|l| (a, l))
        })
        .collect::<Result<_>>()?;
    let best = grid
        .iter()
        .enumerate()
        .min_by(|x, y| x.1 .1.total_cmp(&y.1 .1))
        .map(|(i, _)| i)
        .expect("grid is non-empty");
    if best == 0 || best == grid.len() - 1 {
        return Err(Error::BracketFailure(format!(
            "loss is smallest at the grid edge a = {} (k = {k}, d = {d})",
            grid[best].0
        )));
    }
    let f = |a: f64| approximation_loss(k, a, d);
    let a_star = golden_section(f, grid[best - 1].0, grid[best + 1].0, 1e-10)?;
    Ok(MatchResult { a_star, loss: approximation_loss(k, a_star, d)? })
}

fn golden_section(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (lo + hi))
}
