use super::eigen::symmetric_eigenvalues;
use super::matrix::Matrix;
use super::{tol, NumericsError};

/// Symmetric positive definite matrix. Symmetry is checked on construction;
/// positive definiteness surfaces as `NotPositiveDefinite` from the
/// factorization-backed operations.
#[derive(Clone, Debug)]
pub struct SpdMatrix {
    mat: Matrix,
}

impl SpdMatrix {
    /// Wrap a square matrix, verifying symmetry to within `tol::SYMMETRY`
    /// relative to the largest entry.
    pub fn from_matrix(mat: Matrix) -> Result<Self, NumericsError> {
        if !mat.is_square() {
            return Err(NumericsError::DimensionMismatch);
        }
        let scale = mat.max_abs().max(1.0);
        for i in 0..mat.rows() {
            for j in (i + 1)..mat.cols() {
                if (mat[(i, j)] - mat[(j, i)]).abs() > tol::SYMMETRY * scale {
                    return Err(NumericsError::NotSymmetric);
                }
            }
        }
        Ok(SpdMatrix { mat })
    }

    pub fn identity(n: usize) -> Self {
        SpdMatrix {
            mat: Matrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix {
        self.mat
    }

    /// Lower-triangular Cholesky factor `L` with `L L^T` reconstructing the
    /// matrix. Fails with `NotPositiveDefinite` on a non-positive pivot.
    pub fn cholesky(&self) -> Result<Matrix, NumericsError> {
        let n = self.dim();
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let mut d = self.mat[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if d <= 0.0 {
                return Err(NumericsError::NotPositiveDefinite);
            }
            let djj = d.sqrt();
            l[(j, j)] = djj;
            for i in (j + 1)..n {
                let mut s = self.mat[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(l)
    }

    /// Solve `A x = b` through the Cholesky factorization.
    pub fn solve_vec(&self, b: &[f64]) -> Result<Vec<f64>, NumericsError> {
        let l = self.cholesky()?;
        Ok(chol_solve(&l, b))
    }

    /// Solve `A X = B` column by column.
    pub fn solve_mat(&self, b: &Matrix) -> Result<Matrix, NumericsError> {
        let n = self.dim();
        if b.rows() != n {
            return Err(NumericsError::DimensionMismatch);
        }
        let l = self.cholesky()?;
        let mut cols = Vec::with_capacity(b.cols());
        for j in 0..b.cols() {
            cols.push(chol_solve(&l, &b.column(j)));
        }
        Ok(Matrix::from_columns(n, &cols))
    }

    /// Inverse, computed by solving against the identity.
    pub fn inverse(&self) -> Result<SpdMatrix, NumericsError> {
        let n = self.dim();
        let inv = self.solve_mat(&Matrix::identity(n))?;
        // Cholesky solves return a numerically symmetric result up to
        // roundoff; symmetrize so the wrapper invariant holds exactly.
        let mut sym = inv.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (inv[(i, j)] + inv[(j, i)]);
                sym[(i, j)] = v;
                sym[(j, i)] = v;
            }
        }
        SpdMatrix::from_matrix(sym)
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        quadratic_form(&self.mat, x)
    }

    /// Smallest eigenvalue by Jacobi iteration. Robust at the tiny sizes
    /// used here; speed is irrelevant.
    pub fn min_eigenvalue(&self) -> f64 {
        symmetric_eigenvalues(&self.mat)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Quadratic form `x^T M x` for a symmetric `M` given as a plain matrix.
pub fn quadratic_form(m: &Matrix, x: &[f64]) -> f64 {
    debug_assert_eq!(m.rows(), x.len());
    let mut total = 0.0;
    for i in 0..m.rows() {
        let mut row = 0.0;
        for j in 0..m.cols() {
            row += m[(i, j)] * x[j];
        }
        total += x[i] * row;
    }
    total
}

fn chol_solve(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    debug_assert_eq!(b.len(), n);
    // forward: L y = b
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    // backward: L^T x = y
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[(k, i)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_spd(n: usize, rng: &mut StdRng) -> SpdMatrix {
        // G^T G + I is comfortably positive definite
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = rng.gen_range(-2.0..2.0);
            }
        }
        let m = g.gram().add(&Matrix::identity(n));
        SpdMatrix::from_matrix(m).unwrap()
    }

    #[test]
    fn cholesky_identity() {
        let m = SpdMatrix::identity(3);
        let l = m.cholesky().unwrap();
        assert!(l.max_abs_diff(&Matrix::identity(3)) < 1e-15);
    }

    #[test]
    fn cholesky_reconstructs_2x2() {
        let m = SpdMatrix::from_matrix(Matrix::from_rows(&[&[4.0, 2.0], &[2.0, 3.0]])).unwrap();
        let l = m.cholesky().unwrap();
        let rec = l.matmul(&l.transpose());
        assert!(rec.max_abs_diff(m.as_matrix()) < tol::RECONSTRUCTION);
        // strictly positive diagonal, lower triangular
        assert!(l[(0, 0)] > 0.0 && l[(1, 1)] > 0.0);
        assert_eq!(l[(0, 1)], 0.0);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        // eigenvalues 3 and -1
        let m = SpdMatrix::from_matrix(Matrix::from_rows(&[&[1.0, 2.0], &[2.0, 1.0]])).unwrap();
        assert!(matches!(
            m.cholesky(),
            Err(NumericsError::NotPositiveDefinite)
        ));
    }

    #[test]
    fn cholesky_reconstruction_random() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0001);
        for trial in 0..1000 {
            let n = 1 + trial % 12;
            let m = random_spd(n, &mut rng);
            let l = m.cholesky().unwrap();
            let rec = l.matmul(&l.transpose());
            let scale = m.as_matrix().max_abs().max(1.0);
            assert!(
                rec.max_abs_diff(m.as_matrix()) < tol::RECONSTRUCTION * scale,
                "dim {} residual {}",
                n,
                rec.max_abs_diff(m.as_matrix())
            );
        }
    }

    #[test]
    fn inverse_identity_and_scalar() {
        let i2 = SpdMatrix::identity(2);
        assert!(i2
            .inverse()
            .unwrap()
            .as_matrix()
            .max_abs_diff(&Matrix::identity(2))
            < 1e-15);

        let m = SpdMatrix::from_matrix(Matrix::identity(2).scale(2.0)).unwrap();
        let inv = m.inverse().unwrap();
        assert!(inv.as_matrix().max_abs_diff(&Matrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn inverse_residual_random() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0002);
        for _ in 0..200 {
            let n = 1 + rng.gen_range(0..8);
            let m = random_spd(n, &mut rng);
            let inv = m.inverse().unwrap();
            let prod = m.as_matrix().matmul(inv.as_matrix());
            let scale = m.as_matrix().max_abs().max(1.0);
            assert!(prod.max_abs_diff(&Matrix::identity(n)) < tol::SOLVE * scale);
        }
    }

    #[test]
    fn min_eigenvalue_known_cases() {
        let d = SpdMatrix::from_matrix(Matrix::from_diagonal(&[0.3, 2.0, 5.0])).unwrap();
        assert!((d.min_eigenvalue() - 0.3).abs() < 1e-12);

        let i4 = SpdMatrix::identity(4);
        assert!((i4.min_eigenvalue() - 1.0).abs() < 1e-12);

        // eigenvalues 3 and 1
        let m = SpdMatrix::from_matrix(Matrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap();
        assert!((m.min_eigenvalue() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn min_eigenvalue_courant_fischer_bound() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0003);
        for _ in 0..200 {
            let n = 1 + rng.gen_range(0..10);
            let m = random_spd(n, &mut rng);
            let lam = m.min_eigenvalue();
            for _ in 0..20 {
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let nx = super::super::matrix::norm_sq(&x);
                if nx < 1e-12 {
                    continue;
                }
                assert!(lam * nx <= m.quadratic_form(&x) + 1e-9 * nx);
            }
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let m = Matrix::from_rows(&[&[1.0, 0.5], &[0.2, 1.0]]);
        assert!(matches!(
            SpdMatrix::from_matrix(m),
            Err(NumericsError::NotSymmetric)
        ));
    }
}
