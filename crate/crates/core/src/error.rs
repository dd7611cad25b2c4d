//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by construction, validation, and the numerical kernels.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Spin quantum number is not a positive half-integer.
    #[error("invalid spin quantum number {0}: need j > 0 with 2j integral")]
    InvalidSpin(f64),

    /// Operand dimensions are incompatible.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A state vector failed its unit-norm check.
    #[error("state not normalized: |norm - 1| = {0:e}")]
    NotNormalized(f64),

    /// A parameter violated its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The iterative eigensolver did not converge.
    #[error("eigensolver failed to converge (index {0})")]
    EigNonConvergence(usize),

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge to tolerance {tol:e} (last error {err:e})")]
    QuadratureNonConvergence { tol: f64, err: f64 },

    /// A series evaluation exceeded its term cap without converging.
    #[error("series did not converge within {0} terms")]
    SeriesNonConvergence(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
