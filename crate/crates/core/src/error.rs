use thiserror::Error;

/// Errors raised by the evolution and separability routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// Amplification balances damping exactly; the stationary moments diverge.
    #[error("amplification-damping resonance at eigenvalue {eigenvalue:.6e}")]
    Resonance { eigenvalue: f64 },

    #[error("near-singular matrix (condition estimate {condition:.3e})")]
    Singular { condition: f64 },

    #[error("predicate does not change sign on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("piecewise boundary formulas disagree at a seam: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
