//! Long memory generated two ways: by fractional differencing, `I(d)`, and by
//! cross-sectional aggregation of heterogeneous AR(1) units, `CSA(a, b)`.
//!
//! The crate provides closed-form autocorrelations and MA weights for both,
//! FFT-based simulators, an infinite-MA forecaster, population efficiency
//! losses of AR and fractional approximations, the GPH log-periodogram
//! estimator, and a reproducible Monte Carlo harness.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference constants are written to full precision.
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod estimate;
pub mod fitloss;
pub mod forecast;
pub mod harness;
pub mod model;
pub mod simulate;
pub mod specfun;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
pub use estimate::{GphEstimate, PeriodogramResult};
pub use fitloss::{EfficiencyReport, MatchResult, ModelKind};
pub use forecast::ForecastResult;
pub use harness::{ExperimentConfig, ExperimentKind, ExperimentResult};
pub use model::{CsaParams, FracParams, MaCoefficients, Origin, ProcessParams};
pub use simulate::{Generator, SeedSpec, SeriesSample};
