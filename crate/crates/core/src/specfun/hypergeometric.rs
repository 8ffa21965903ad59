//! Generalized hypergeometric series `pFq(num; den; z)`.
//!
//! For `|z| < 1` the series is summed directly with a geometric bound on
//! the tail. At `z = 1` the terms only decay like `n^{-(s+1)}`, where `s`
//! is the parameter excess `Σden - Σnum`, so the partial sums are
//! extrapolated instead: by Stirling, `S_N = S - N^{-s} (g0 + g1/N + ...)`,
//! and repeated Richardson steps over `N, 2N, 4N, ...` remove those terms
//! one power at a time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PFQ_TOL: f64 = 1e-12;
const MAX_TERMS: usize = 10_000_000;
const RICHARDSON_DEPTH: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PfqSpec {
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
    pub argument: f64,
}

impl PfqSpec {
    pub fn new(numerator: Vec<f64>, denominator: Vec<f64>, argument: f64) -> Result<Self> {
        if let Some(b) = denominator.iter().find(|&&b| b <= 0.0 && b == b.floor()) {
            return Err(Error::InvalidParameter(format!(
                "denominator parameter {b} is zero or a negative integer"
            )));
        }
        if numerator.iter().chain(&denominator).any(|v| !v.is_finite()) || !argument.is_finite() {
            return Err(Error::InvalidParameter("non-finite pFq parameter".into()));
        }
        Ok(Self { numerator, denominator, argument })
    }

    /// Shorthand for a series at unit argument.
    pub fn at_unity(numerator: Vec<f64>, denominator: Vec<f64>) -> Result<Self> {
        Self::new(numerator, denominator, 1.0)
    }

    /// `Σ denominators - Σ numerators`; must be positive for convergence at `z = 1`.
    pub fn parameter_excess(&self) -> f64 {
        self.denominator.iter().sum::<f64>() - self.numerator.iter().sum::<f64>()
    }

    /// Degree `m` of the polynomial when some numerator equals `-m`.
    pub fn terminating_degree(&self) -> Option<usize> {
        self.numerator
            .iter()
            .filter(|&&a| a <= 0.0 && a == a.floor())
            .map(|&a| (-a) as usize)
            .min()
    }

    /// `t_{n+1} / t_n`.
    fn term_ratio(&self, n: usize) -> f64 {
        let n = n as f64;
        let num: f64 = self.numerator.iter().map(|a| a + n).product();
        let den: f64 = self.denominator.iter().map(|b| b + n).product();
        num / den * self.argument / (n + 1.0)
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Evaluate `Σ_n ∏(num)_n / ∏(den)_n · z^n / n!` to relative tolerance `rel_tol`.
pub fn hypergeometric_pfq(spec: &PfqSpec, rel_tol: f64) -> Result<f64> {
    if !(rel_tol > 0.0) {
        return Err(Error::InvalidParameter(format!("rel_tol must be positive, got {rel_tol}")));
    }
    if let Some(m) = spec.terminating_degree() {
        return Ok(finite_sum(spec, m));
    }
    let z = spec.argument;
    if z == 0.0 {
        return Ok(1.0);
    }
    if z.abs() < 1.0 {
        return sum_inside_disc(spec, rel_tol);
    }
    if z == 1.0 {
        let excess = spec.parameter_excess();
        if !(excess > 0.0) {
            return Err(Error::NonConvergence(format!(
                "parameter excess {excess} must be positive at unit argument"
            )));
        }
        return sum_at_unity(spec, excess, rel_tol);
    }
    Err(Error::NonConvergence(format!("|z| = {} outside the unit disc", z.abs())))
}

fn finite_sum(spec: &PfqSpec, degree: usize) -> f64 {
    let mut acc = CompensatedSum::default();
    let mut term = 1.0;
    for n in 0..=degree {
        acc.add(term);
        term *= spec.term_ratio(n);
    }
    acc.value()
}

fn sum_inside_disc(spec: &PfqSpec, rel_tol: f64) -> Result<f64> {
    let mut acc = CompensatedSum::default();
    let mut term = 1.0;
    for n in 0..MAX_TERMS {
        acc.add(term);
        let ratio = spec.term_ratio(n);
        term *= ratio;
        let s = acc.value().abs();
        let r = ratio.abs();
        // once the ratio has settled below one the remaining terms are
        // dominated by a geometric series with that ratio
        if r < 1.0 && term.abs() <= rel_tol * s && term.abs() / (1.0 - r) <= rel_tol * s {
            acc.add(term);
            return Ok(acc.value());
        }
    }
    Err(Error::NonConvergence(format!("no convergence within {MAX_TERMS} terms")))
}

fn sum_at_unity(spec: &PfqSpec, excess: f64, rel_tol: f64) -> Result<f64> {
    let scale = spec
        .numerator
        .iter()
        .chain(&spec.denominator)
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let mut checkpoint = 64usize.max((16.0 * scale).ceil() as usize).next_power_of_two();

    let mut acc = CompensatedSum::default();
    let mut term = 1.0;
    let mut n = 0usize;
    // rows[i][k]: k-th Richardson column at the i-th checkpoint
    let mut prev_row: Vec<f64> = Vec::new();
    let mut prev_estimate: Option<f64> = None;

    while checkpoint <= MAX_TERMS {
        while n < checkpoint {
            acc.add(term);
            term *= spec.term_ratio(n);
            n += 1;
        }
        let mut row = vec![acc.value()];
        for k in 1..=prev_row.len().min(RICHARDSON_DEPTH) {
            let f = 2f64.powf(excess + (k - 1) as f64);
            row.push((f * row[k - 1] - prev_row[k - 1]) / (f - 1.0));
        }
        let estimate = *row.last().expect("row is non-empty");
        if let Some(prev) = prev_estimate {
            if row.len() >= 4 && (estimate - prev).abs() <= rel_tol * estimate.abs() {
                return Ok(estimate);
            }
        }
        prev_estimate = Some(estimate);
        prev_row = row;
        checkpoint *= 2;
    }
    Err(Error::NonConvergence(format!(
        "extrapolated sum did not settle to {rel_tol:e} within {MAX_TERMS} terms"
    )))
}
