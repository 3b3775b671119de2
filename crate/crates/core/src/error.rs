use thiserror::Error;

/// Errors raised by the numerical kernels, the simulator and the estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A series, quadrature or root bracket ran out of budget before meeting its tolerance.
    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("alpha = {0} is outside the admissible range")]
    AlphaOutOfRange(f64),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The truncated forward equations lost more probability mass than allowed.
    #[error("state truncation too small: tail mass {tail_mass:e} exceeds {limit:e}")]
    TruncationTooSmall { tail_mass: f64, limit: f64 },

    /// Half-grid comparison of a convolution rule exceeded the tolerance.
    #[error("convolution grid too coarse: half-grid difference {estimate:e} exceeds {tol:e}")]
    GridTooCoarse { estimate: f64, tol: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("sample path has no sojourn starting from a non-empty state")]
    EmptyPath,

    #[error("time {t} outside the path horizon [0, {end}]")]
    OutOfRange { t: f64, end: f64 },

    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn non_convergence(what: &'static str, detail: impl Into<String>) -> Self {
        Error::NonConvergence {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }

    /// True for the numerical failure family (exit code 3 in the CLI).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::GridTooCoarse { .. } | Error::TruncationTooSmall { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
