use thiserror::Error;

/// Errors raised by state construction, transforms, purity evaluation and scattering.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid does not cover the state: tail mass {tail_mass:.3e} exceeds {limit:.1e}")]
    Coverage { tail_mass: f64, limit: f64 },

    #[error("degenerate state: norm {0:.3e}")]
    DegenerateState(f64),

    #[error(
        "state is not normalized: norm {norm:.12} deviates from 1 by more than {tolerance:.1e}"
    )]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("linear map is not unimodular: |det| = {0:.15}")]
    NotUnimodular(f64),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("modes {first} and {second} overlap: |<f_i|f_j>| / (|f_i| |f_j|) = {overlap:.3e} >= {tolerance:.1e}")]
    ModeOverlap {
        first: usize,
        second: usize,
        overlap: f64,
        tolerance: f64,
    },

    #[error("mode purities do not add up: total {total:.12} vs sum {sum:.12}")]
    SplitMismatch { total: f64, sum: f64 },

    #[error("relative momentum must be positive, got {0}")]
    MomentumDomain(f64),

    #[error("scattering boundary condition violated: {0}")]
    BoundaryCondition(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("grid of {n} points exceeds the limit of {limit} for this routine")]
    TooLarge { n: usize, limit: usize },

    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
