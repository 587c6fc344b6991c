use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("trace {got} differs from required {expected}")]
    InvalidTrace { expected: f64, got: f64 },

    #[error("negative eigenvalue {0:e}")]
    NotPositiveSemidefinite(f64),

    #[error("state is not strictly positive: smallest eigenvalue {min:e} <= floor {floor:e}")]
    NotStrictlyPositive { min: f64, floor: f64 },

    #[error("channel is not trace preserving (defect {0:e})")]
    NotTracePreserving(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("exponent {value:e} exceeds overflow bound {bound:e}")]
    Overflow { value: f64, bound: f64 },

    #[error("feature has zero norm")]
    ZeroFeature,

    #[error("thermal density is not normalizable: {0}")]
    NonNormalizable(String),

    #[error("grid too narrow: boundary mass loss {0:e}")]
    GridTooNarrow(f64),

    #[error("mode {0} is not part of the lattice")]
    UnknownMode(String),

    #[error("matrix is not invertible: {0}")]
    NotInvertible(&'static str),

    #[error("operator monotone kernel is invalid: {0}")]
    InvalidKernel(String),

    #[error("eigensolver failed: {0}")]
    EigenFailure(String),

    #[error("quadrature did not reach tolerance {tol:e} (estimated error {err:e})")]
    QuadratureFailure { tol: f64, err: f64 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
