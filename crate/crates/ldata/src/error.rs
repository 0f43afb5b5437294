//! Error types shared across the crate.

use thiserror::Error;

/// Errors reported by construction, evaluation and classification routines.
///
/// Validation problems (axiom checks) are *not* errors; they are reported
/// through [`crate::datum::ValidationReport`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("limit extrapolation did not converge (residual {residual:.3e} > tol {tol:.3e})")]
    NonConvergent { residual: f64, tol: f64 },

    #[error("zero windows do not overlap in strict mode")]
    IncompatibleWindows,

    #[error("leading Dirichlet coefficient must be 1, got {0}")]
    BadLeadingCoefficient(String),

    #[error("modulus {0} exceeds the supported cap {1}")]
    ModulusTooLarge(u64, u64),

    #[error("character mod {0} (index {1}) is not primitive")]
    NotPrimitive(u64, usize),

    #[error("invalid gamma-factor data: {0}")]
    InvalidFactor(String),

    #[error("|Im z| = {0} exceeds the transform strip bound {1}")]
    StripExceeded(f64, f64),

    #[error("coefficient horizon {horizon} too short (need n <= {needed})")]
    HorizonTooShort { horizon: usize, needed: usize },

    #[error("zero window too short: {0}")]
    WindowTooShort(String),

    #[error("kernel transform tail diverges: {0}")]
    DivergentTail(String),

    #[error("argument outside domain: {0}")]
    DomainError(String),

    #[error("functional equation violated: {0}")]
    FEViolated(String),

    #[error("least-squares system is ill-conditioned")]
    IllConditioned,

    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },

    #[error("zero data violates conjugate symmetry at z = {0}")]
    SymmetryViolation(String),

    #[error("datum has degree 0; no shift is defined")]
    ZeroDegree,

    #[error("no period <= {0} matches the coefficient sequence")]
    NotPeriodic(usize),

    #[error("more than one character matches the coefficients")]
    AmbiguousMatch,

    #[error("exponential-sum tail bound {bound:.3e} exceeds tolerance {tol:.3e}")]
    TailTooLarge { bound: f64, tol: f64 },

    #[error("argument out of supported range: {0}")]
    OutOfRange(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
