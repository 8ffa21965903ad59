//! Closed-form descriptions of the two long-memory processes.
//!
//! * `I(d)`: fractional noise `(1 - L)^d x_t = ε_t` with MA weights
//!   `π_j = Γ(j + d) / (Γ(d) Γ(j + 1))`.
//! * `CSA(a, b)`: the limit of `N^{-1/2} Σ_i x_{i,t}` over AR(1) units whose
//!   squared coefficients are `Beta(a, b)`; memory `d = 1 - b/2`.
//!
//! Lag shifts by whole integers are evaluated with one-step product
//! recursions; the half-integer shift in the CSA autocorrelation goes
//! through log-gamma differences.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::specfun::{hurwitz_zeta, ln_gamma_pos, BetaRatios};

/// Memory parameter of an `I(d)` process, `d ∈ (-1/2, 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFrac", into = "RawFrac")]
pub struct FracParams {
    d: f64,
}

#[derive(Serialize, Deserialize)]
struct RawFrac {
    d: f64,
}

impl TryFrom<RawFrac> for FracParams {
    type Error = Error;
    fn try_from(raw: RawFrac) -> Result<Self> {
        FracParams::new(raw.d)
    }
}

impl From<FracParams> for RawFrac {
    fn from(p: FracParams) -> Self {
        RawFrac { d: p.d }
    }
}

impl FracParams {
    pub fn new(d: f64) -> Result<Self> {
        if !(d > -0.5 && d < 0.5) {
            return Err(invalid(format!("d must lie in (-1/2, 1/2), got {d}")));
        }
        Ok(Self { d })
    }

    pub fn d(&self) -> f64 {
        self.d
    }
}

/// Beta parameters of a `CSA(a, b)` process plus the innovation scale.
///
/// Construction only requires `a, b > 0`; quantities that need a finite
/// variance (`b > 1`) check it themselves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCsa", into = "RawCsa")]
pub struct CsaParams {
    a: f64,
    b: f64,
    sigma_eps: f64,
}

#[derive(Serialize, Deserialize)]
struct RawCsa {
    a: f64,
    b: f64,
    #[serde(default = "unit_sigma")]
    sigma_eps: f64,
}

fn unit_sigma() -> f64 {
    1.0
}

impl TryFrom<RawCsa> for CsaParams {
    type Error = Error;
    fn try_from(raw: RawCsa) -> Result<Self> {
        CsaParams::with_sigma(raw.a, raw.b, raw.sigma_eps)
    }
}

impl From<CsaParams> for RawCsa {
    fn from(p: CsaParams) -> Self {
        RawCsa { a: p.a, b: p.b, sigma_eps: p.sigma_eps }
    }
}

impl CsaParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Self::with_sigma(a, b, 1.0)
    }

    pub fn with_sigma(a: f64, b: f64, sigma_eps: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(invalid(format!("a must be positive, got {a}")));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(invalid(format!("b must be positive, got {b}")));
        }
        if !(sigma_eps > 0.0) || !sigma_eps.is_finite() {
            return Err(invalid(format!("sigma_eps must be positive, got {sigma_eps}")));
        }
        Ok(Self { a, b, sigma_eps })
    }

    /// The CSA process with the same long-run decay as `I(d)`: `b = 2(1 - d)`.
    pub fn matching_memory(a: f64, d: f64) -> Result<Self> {
        Self::new(a, 2.0 * (1.0 - d))
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn sigma_eps(&self) -> f64 {
        self.sigma_eps
    }

    /// Implied memory `d = 1 - b/2`.
    pub fn memory(&self) -> f64 {
        1.0 - self.b / 2.0
    }

    /// Errors unless `b > 1`, the range where the autocovariances exist.
    pub fn require_stationary(&self) -> Result<()> {
        if self.b > 1.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "b must exceed 1 for a finite-variance CSA process, got b = {}",
                self.b
            )))
        }
    }
}

impl fmt::Display for CsaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CSA({}, {})", self.a, self.b)
    }
}

impl fmt::Display for FracParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I({})", self.d)
    }
}

/// Either process, as carried by samples, coefficient vectors and configs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "process", rename_all = "lowercase")]
pub enum ProcessParams {
    Frac(FracParams),
    Csa(CsaParams),
}

impl ProcessParams {
    /// Memory parameter `d` of the process.
    pub fn memory(&self) -> f64 {
        match self {
            ProcessParams::Frac(p) => p.d(),
            ProcessParams::Csa(p) => p.memory(),
        }
    }
}

impl fmt::Display for ProcessParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProcessParams::Frac(p) => p.fmt(f),
            ProcessParams::Csa(p) => p.fmt(f),
        }
    }
}

impl From<FracParams> for ProcessParams {
    fn from(p: FracParams) -> Self {
        ProcessParams::Frac(p)
    }
}

impl From<CsaParams> for ProcessParams {
    fn from(p: CsaParams) -> Self {
        ProcessParams::Csa(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Fractional,
    Csa,
}

/// Leading `T` weights of an MA(∞) filter, `weights[0] = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaCoefficients {
    pub weights: Vec<f64>,
    pub params: ProcessParams,
}

impl MaCoefficients {
    pub fn origin(&self) -> Origin {
        match self.params {
            ProcessParams::Frac(_) => Origin::Fractional,
            ProcessParams::Csa(_) => Origin::Csa,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Binomial weights of `(1 - L)^{-d}` for any real `d`:
/// `w_0 = 1`, `w_j = w_{j-1} (j - 1 + d) / j`.
pub fn fractional_weights(d: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut w = 1.0;
    for j in 0..n {
        out.push(w);
        let j1 = (j + 1) as f64;
        w *= (j1 - 1.0 + d) / j1;
    }
    out
}

pub fn frac_ma_coeffs(p: FracParams, t: usize) -> Result<MaCoefficients> {
    if t == 0 {
        return Err(invalid("coefficient count must be at least 1"));
    }
    Ok(MaCoefficients { weights: fractional_weights(p.d(), t), params: p.into() })
}

/// `φ_j = (B(a + j, b) / B(a, b))^{1/2}` for `j < t`.
pub fn csa_ma_coeffs(p: CsaParams, t: usize) -> Result<MaCoefficients> {
    if t == 0 {
        return Err(invalid("coefficient count must be at least 1"));
    }
    let weights = BetaRatios::new(p.a(), p.b()).take(t).map(f64::sqrt).collect();
    Ok(MaCoefficients { weights, params: p.into() })
}

/// Autocorrelation of `I(d)` at lag `k`.
pub fn acf_frac(p: FracParams, k: usize) -> f64 {
    acf_frac_lags(p, k)[k]
}

/// `γ(0..=max_lag)` for `I(d)` by `γ(k) = γ(k-1) (k - 1 + d) / (k - d)`.
pub fn acf_frac_lags(p: FracParams, max_lag: usize) -> Vec<f64> {
    let d = p.d();
    let mut out = Vec::with_capacity(max_lag + 1);
    let mut g = 1.0;
    out.push(g);
    for k in 1..=max_lag {
        let k = k as f64;
        g *= (k - 1.0 + d) / (k - d);
        out.push(g);
    }
    out
}

/// `B(a + k/2, b - 1) / B(a, b - 1)`.
pub fn acf_csa(p: CsaParams, k: usize) -> Result<f64> {
    p.require_stationary()?;
    if k == 0 {
        return Ok(1.0);
    }
    Ok(acf_csa_log(p.a(), p.b(), k).exp())
}

fn acf_csa_log(a: f64, b: f64, k: usize) -> f64 {
    let h = a + k as f64 / 2.0;
    ln_gamma_pos(h) - ln_gamma_pos(h + b - 1.0) - ln_gamma_pos(a) + ln_gamma_pos(a + b - 1.0)
}

/// `γ(0..=max_lag)` for `CSA(a, b)`.
///
/// Lags of equal parity differ by a whole-integer shift of the first Beta
/// argument, so each parity is a product recursion seeded at lag 0 or 1.
pub fn acf_csa_lags(p: CsaParams, max_lag: usize) -> Result<Vec<f64>> {
    p.require_stationary()?;
    let (a, b) = (p.a(), p.b());
    let mut out = vec![0.0; max_lag + 1];
    out[0] = 1.0;
    if max_lag >= 1 {
        out[1] = acf_csa_log(a, b, 1).exp();
    }
    for k in 2..=max_lag {
        let h = a + (k - 2) as f64 / 2.0;
        out[k] = out[k - 2] * h / (h + b - 1.0);
    }
    Ok(out)
}

/// `σ² B(a, b - 1) / B(a, b) = σ² (a + b - 1) / (b - 1)`.
pub fn csa_variance(p: CsaParams) -> Result<f64> {
    p.require_stationary()?;
    let (a, b) = (p.a(), p.b());
    Ok(p.sigma_eps().powi(2) * (a + b - 1.0) / (b - 1.0))
}

/// Autocovariance `σ² B(a + k/2, b - 1) / B(a, b)` for lags `0..=max_lag`.
pub fn acvf_csa_lags(p: CsaParams, max_lag: usize) -> Result<Vec<f64>> {
    let v = csa_variance(p)?;
    Ok(acf_csa_lags(p, max_lag)?.into_iter().map(|g| g * v).collect())
}

const SPECTRUM_REL_TOL: f64 = 1e-10;

/// `f(0) = (σ²/2π) (Σ_j φ_j)²` for `b > 2`.
///
/// The head of the series is summed directly. The tail uses
/// `φ_j = K y^{-b/2} (1 + b(b²-1)/(48 y²) + O(y^{-4}))`, `y = j + a + (b-1)/2`,
/// summed exactly with Hurwitz zeta, and the split point is doubled until
/// the result is stable.
pub fn csa_spectrum_at_zero(p: CsaParams) -> Result<f64> {
    let (a, b) = (p.a(), p.b());
    if !(b > 2.0) {
        return Err(Error::NonConvergence(format!(
            "Σφ_j diverges for b ≤ 2 (nonnegative memory), got b = {b}"
        )));
    }
    let s = b / 2.0;
    let k = (0.5 * (ln_gamma_pos(a + b) - ln_gamma_pos(a))).exp();
    let shift = a + (b - 1.0) / 2.0;
    let e2 = b * (b * b - 1.0) / 48.0;

    let mut ratios = BetaRatios::new(a, b);
    let mut head = 0.0f64;
    let mut comp = 0.0f64;
    let mut consumed = 0usize;
    let mut split = 256usize;
    let mut prev: Option<f64> = None;

    while split <= 1 << 24 {
        for r in ratios.by_ref().take(split - consumed) {
            let y = r.sqrt() - comp;
            let t = head + y;
            comp = (t - head) - y;
            head = t;
        }
        consumed = split;
        let q = split as f64 + shift;
        let tail = k * (hurwitz_zeta(s, q)? + e2 * hurwitz_zeta(s + 2.0, q)?);
        let total = head + tail;
        if let Some(prev) = prev {
            if (total - prev).abs() <= SPECTRUM_REL_TOL * total {
                return Ok(p.sigma_eps().powi(2) / (2.0 * PI) * total * total);
            }
        }
        prev = Some(total);
        split *= 2;
    }
    Err(Error::NonConvergence("spectral constant did not stabilise".into()))
}

/// The closed-form approximation `σ² Γ(b) / (2π B(a, b)) ζ(b/2)²`, meaningful
/// only as an order-of-magnitude companion to [`csa_spectrum_at_zero`].
pub fn csa_spectrum_at_zero_closed_form(p: CsaParams) -> Result<f64> {
    let (a, b) = (p.a(), p.b());
    if !(b > 2.0) {
        return Err(Error::NonConvergence(format!("ζ(b/2) diverges for b ≤ 2, got {b}")));
    }
    let ln_beta = ln_gamma_pos(a) + ln_gamma_pos(b) - ln_gamma_pos(a + b);
    let z = crate::specfun::riemann_zeta(b / 2.0)?;
    Ok(p.sigma_eps().powi(2) * (ln_gamma_pos(b) - ln_beta).exp() / (2.0 * PI) * z * z)
}
