//! Special functions: log-gamma, Beta ratios, zeta, and `pFq` at unit argument.

mod gamma;
mod hypergeometric;
mod zeta;

pub use gamma::{beta_ratio, log_beta, log_gamma, log_gamma_signed, BetaRatios};
pub(crate) use gamma::ln_gamma_pos;
pub use hypergeometric::{hypergeometric_pfq, PfqSpec, DEFAULT_PFQ_TOL};
pub use zeta::{hurwitz_zeta, riemann_zeta};
