//! FFT and linear-convolution kernel.
//!
//! `fft` is an iterative radix-2 decimation-in-time transform. Lengths that
//! are not powers of two go through [`dft`], which rewrites the transform as
//! a chirp convolution (Bluestein) evaluated with the radix-2 kernel.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `X_k = Σ_n x_n e^{-2πikn/N}`
    Forward,
    /// `x_n = (1/N) Σ_k X_k e^{+2πikn/N}`
    Inverse,
}

/// Transform `buf` in place. `buf.len()` must be a power of two.
pub fn fft_in_place(buf: &mut [Complex64], direction: Direction) -> Result<()> {
    let n = buf.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::Length(n));
    }
    if n == 1 {
        return Ok(());
    }

    bit_reverse_permute(buf);

    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    // twiddles for the largest stage; smaller stages stride through them
    let half = n / 2;
    let twiddles: Vec<Complex64> = (0..half)
        .map(|k| Complex64::from_polar(1.0, sign * 2.0 * PI * k as f64 / n as f64))
        .collect();

    let mut len = 2;
    while len <= n {
        let step = n / len;
        let half_len = len / 2;
        for chunk in buf.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half_len);
            for (k, (u, v)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                let t = *v * twiddles[k * step];
                *v = *u - t;
                *u += t;
            }
        }
        len <<= 1;
    }

    if direction == Direction::Inverse {
        let scale = 1.0 / n as f64;
        buf.iter_mut().for_each(|z| *z *= scale);
    }
    Ok(())
}

fn bit_reverse_permute(buf: &mut [Complex64]) {
    let n = buf.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            buf.swap(i, j);
        }
    }
}

/// Out-of-place radix-2 transform.
pub fn fft(input: &[Complex64], direction: Direction) -> Result<Vec<Complex64>> {
    let mut buf = input.to_vec();
    fft_in_place(&mut buf, direction)?;
    Ok(buf)
}

/// Discrete Fourier transform of any positive length.
pub fn dft(input: &[Complex64], direction: Direction) -> Result<Vec<Complex64>> {
    let n = input.len();
    if n == 0 {
        return Err(Error::Length(0));
    }
    if n.is_power_of_two() {
        return fft(input, direction);
    }
    if direction == Direction::Inverse {
        let conj: Vec<Complex64> = input.iter().map(|z| z.conj()).collect();
        let scale = 1.0 / n as f64;
        return Ok(bluestein(&conj)?.into_iter().map(|z| z.conj() * scale).collect());
    }
    bluestein(input)
}

fn bluestein(x: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = x.len();
    let m = (2 * n - 1).next_power_of_two();
    // w_k = exp(-iπ k²/n); k² reduced mod 2n keeps the angle exact
    let modulus = 2 * n as u64;
    let chirp: Vec<Complex64> = (0..n as u64)
        .map(|k| {
            let r = (k * k) % modulus;
            Complex64::from_polar(1.0, -PI * r as f64 / n as f64)
        })
        .collect();

    let mut a = vec![Complex64::new(0.0, 0.0); m];
    for (slot, (xi, wi)) in a.iter_mut().zip(x.iter().zip(&chirp)) {
        *slot = xi * wi;
    }
    let mut b = vec![Complex64::new(0.0, 0.0); m];
    b[0] = chirp[0].conj();
    for k in 1..n {
        let c = chirp[k].conj();
        b[k] = c;
        b[m - k] = c;
    }
    fft_in_place(&mut a, Direction::Forward)?;
    fft_in_place(&mut b, Direction::Forward)?;
    for (ai, bi) in a.iter_mut().zip(&b) {
        *ai *= bi;
    }
    fft_in_place(&mut a, Direction::Inverse)?;
    Ok(a.iter().zip(&chirp).map(|(ai, wi)| ai * wi).collect())
}

/// Padded transform length used for a linear convolution of two length-`t` inputs.
pub fn convolution_length(t: usize) -> usize {
    (2 * t.max(1) - 1).next_power_of_two()
}

fn padded_spectrum(x: &[f64], len: usize) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (slot, &v) in buf.iter_mut().zip(x) {
        slot.re = v;
    }
    fft_in_place(&mut buf, Direction::Forward).expect("padded length is a power of two");
    buf
}

/// First `T` elements of the linear convolution of `x` and `y`:
/// `out[t] = Σ_{j≤t} y_j x_{t-j}`.
pub fn circular_convolve(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter(format!(
            "convolution inputs differ in length: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.is_empty() {
        return Err(Error::InvalidParameter("convolution inputs are empty".into()));
    }
    Ok(ConvolutionPlan::new(y).apply(x))
}

/// Pre-transformed filter for repeated convolutions against the same weights.
#[derive(Debug, Clone)]
pub struct ConvolutionPlan {
    taps: usize,
    spectrum: Vec<Complex64>,
}

impl ConvolutionPlan {
    pub fn new(filter: &[f64]) -> Self {
        let len = convolution_length(filter.len());
        Self { taps: filter.len(), spectrum: padded_spectrum(filter, len) }
    }

    pub fn len(&self) -> usize {
        self.taps
    }

    pub fn is_empty(&self) -> bool {
        self.taps == 0
    }

    /// Filter `x` (truncated or zero-extended to the filter length) and keep
    /// the first `filter.len()` outputs.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let len = self.spectrum.len();
        let mut buf = padded_spectrum(&x[..x.len().min(self.taps)], len);
        for (b, f) in buf.iter_mut().zip(&self.spectrum) {
            *b *= f;
        }
        fft_in_place(&mut buf, Direction::Inverse).expect("padded length is a power of two");
        buf.truncate(self.taps);
        buf.into_iter().map(|z| z.re).collect()
    }
}
