use super::eigen::symmetric_eigenvalues;
use super::matrix::Matrix;
use super::spd::SpdMatrix;
use super::{tol, NumericsError};

/// Orthogonal projector onto the complement of the span of a set of columns:
/// `F = I - A (A^T A)^{-1} A^T`. Symmetric and idempotent by construction,
/// with rank `dim - #columns`.
#[derive(Clone, Debug)]
pub struct ProjectionMatrix {
    mat: Matrix,
    rank: usize,
}

impl ProjectionMatrix {
    /// Projector onto the orthogonal complement of the column span of
    /// `a_cols`. An empty column set yields the identity. Near-dependent
    /// columns (condition number of `A^T A` above `tol::CONDITION_LIMIT`)
    /// are rejected rather than regularized: callers pass exact integer
    /// columns, so near-singularity indicates a bug upstream.
    pub fn complement_of(a_cols: &Matrix) -> Result<Self, NumericsError> {
        let dim = a_cols.rows();
        let k = a_cols.cols();
        if k == 0 {
            return Ok(ProjectionMatrix {
                mat: Matrix::identity(dim),
                rank: dim,
            });
        }
        if k > dim {
            return Err(NumericsError::DependentColumns);
        }

        let gram = a_cols.gram();
        let eig = symmetric_eigenvalues(&gram);
        let lam_min = eig[0];
        let lam_max = eig[eig.len() - 1];
        if lam_min <= 0.0 || lam_max / lam_min > tol::CONDITION_LIMIT {
            return Err(NumericsError::DependentColumns);
        }

        let gram = SpdMatrix::from_matrix(gram).map_err(|_| NumericsError::DependentColumns)?;
        let x = gram
            .solve_mat(&a_cols.transpose())
            .map_err(|_| NumericsError::DependentColumns)?;
        let f = Matrix::identity(dim).sub(&a_cols.matmul(&x));
        Ok(ProjectionMatrix {
            mat: f,
            rank: dim - k,
        })
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.mat.mul_vec(v)
    }
}
