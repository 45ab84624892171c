use thiserror::Error;

/// Errors raised by the oracles, decompositions and solvers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {n} is too small (need at least {min})")]
    DimensionTooSmall { n: usize, min: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not skew-symmetric (residual {residual:e})")]
    NotSkew { residual: f64 },

    #[error("{what} did not converge within {iterations} iterations")]
    ConvergenceFailure {
        what: &'static str,
        iterations: usize,
    },

    #[error("vector is not on the boundary of the Lorentz cone (t - |u| = {gap:e})")]
    NotOnBoundary { gap: f64 },

    #[error("independent oracles disagree: {0}")]
    OracleDisagreement(String),

    #[error("matrix is not a Z-transformation on the Lorentz cone (gamma = {gamma:e})")]
    NotAZTransformation { gamma: f64 },

    #[error("matrix is not positive semidefinite (lambda_min = {lambda_min:e})")]
    NotPsd { lambda_min: f64 },

    #[error("matrix is not on the slice <J, X> = 0 (residual {residual:e})")]
    NotOnSlice { residual: f64 },

    #[error("certificate construction failed: {0}")]
    CertificateFailure(String),

    #[error("linear algebra failure: {0}")]
    LinearAlgebraFailure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
