//! Small descriptive statistics shared by the estimators and the harness.

/// Sample autocorrelations for lags `0..=max_lag`.
///
/// With `demean` false the series is taken to have known mean zero.
pub fn sample_acf(x: &[f64], max_lag: usize, demean: bool) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return vec![f64::NAN; max_lag + 1];
    }
    let mu = if demean { mean(x) } else { 0.0 };
    let centred: Vec<f64> = x.iter().map(|v| v - mu).collect();
    let c0: f64 = centred.iter().map(|v| v * v).sum();
    (0..=max_lag)
        .map(|k| {
            if k >= n {
                return f64::NAN;
            }
            let ck: f64 = centred[..n - k].iter().zip(&centred[k..]).map(|(u, v)| u * v).sum();
            ck / c0
        })
        .collect()
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample standard deviation with divisor `n - 1`; `None` when `n < 2`.
pub fn sd(x: &[f64]) -> Option<f64> {
    if x.len() < 2 {
        return None;
    }
    let m = mean(x);
    let ss: f64 = x.iter().map(|v| (v - m).powi(2)).sum();
    Some((ss / (x.len() - 1) as f64).sqrt())
}

pub fn median(x: &[f64]) -> f64 {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Least-squares line through `(x, y)`: returns `(intercept, slope)`, or
/// `None` when the regressor has no spread.
pub fn ols_line(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let mx = mean(x);
    let my = mean(y);
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - mx) * (v - my)).sum();
    let slope = sxy / sxx;
    Some((my - slope * mx, slope))
}
