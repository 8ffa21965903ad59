use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates a documented constraint, e.g. `b > 1`.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A special function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("transform length {0} is not a power of two")]
    Length(usize),

    #[error("series did not converge: {0}")]
    NonConvergence(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("no interior minimum in search bracket: {0}")]
    BracketFailure(String),

    #[error("degenerate regression: {0}")]
    DegenerateRegression(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// True for errors caused by bad input rather than a numerical failure.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_) | Error::Domain(_) | Error::Length(_) | Error::Config(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
