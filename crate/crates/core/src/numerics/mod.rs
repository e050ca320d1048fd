//! Dense real linear algebra kernel shared by every other module:
//! Cholesky factorization, SPD solves and inverses, symmetric eigenvalues,
//! and orthogonal-complement projectors. All work is in `f64`; the matrices
//! involved never exceed a handful of rows, so robustness wins over speed
//! everywhere.

mod eigen;
mod matrix;
mod projection;
mod spd;

pub use eigen::symmetric_eigenvalues;
pub use matrix::{dot, norm_sq, Matrix};
pub use projection::ProjectionMatrix;
pub use spd::{quadratic_form, SpdMatrix};

/// Centralized tolerance constants.
pub mod tol {
    /// Relative symmetry check on SPD construction.
    pub const SYMMETRY: f64 = 1e-12;
    /// Relative factorization reconstruction residual.
    pub const RECONSTRUCTION: f64 = 1e-10;
    /// Relative solve / inverse residual.
    pub const SOLVE: f64 = 1e-9;
    /// Absolute projector idempotency / symmetry residual.
    pub const PROJECTION: f64 = 1e-10;
    /// Condition-number cutoff above which a column set counts as dependent.
    pub const CONDITION_LIMIT: f64 = 1e12;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NumericsError {
    /// A pivot of the Cholesky factorization was non-positive; the input is
    /// positive semi-definite at best.
    NotPositiveDefinite,
    /// Input claimed symmetric exceeds the symmetry tolerance.
    NotSymmetric,
    /// Columns are (numerically) linearly dependent.
    DependentColumns,
    DimensionMismatch,
}

impl std::fmt::Display for NumericsError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NumericsError::NotPositiveDefinite => write!(f, "matrix is not positive definite"),
            NumericsError::NotSymmetric => write!(f, "matrix is not symmetric"),
            NumericsError::DependentColumns => write!(f, "columns are linearly dependent"),
            NumericsError::DimensionMismatch => write!(f, "dimension mismatch"),
        }
    }
}

impl std::error::Error for NumericsError {}
