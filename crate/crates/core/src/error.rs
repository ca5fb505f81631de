use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    /// The result is finite mathematically but not representable as `f64`.
    #[error("overflow: {0}")]
    Overflow(&'static str),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    /// Numerical rank below the column count.
    #[error("rank deficient: sigma_min {sigma_min:e} <= tolerance relative to sigma_max {sigma_max:e}")]
    RankDeficient { sigma_min: f64, sigma_max: f64 },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("columns are not orthonormal (max |QᵀQ - I| = {0:e})")]
    NotOrthonormal(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }
}
