use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numerics::Matrix;

/// Equation coefficient vector and friends: plain signed integers.
pub type IntVector = Vec<i64>;

/// Flip the sign so the first nonzero entry is positive. A quadratic form
/// cannot distinguish `a` from `-a`, so this fixes the representative.
pub fn canonical_sign(v: &mut [i64]) {
    if let Some(&first) = v.iter().find(|&&x| x != 0) {
        if first < 0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// Colexicographic order (compare from the last coordinate backwards).
/// Among the canonicalized unit vectors this ranks `e1` first.
pub fn colex_less(a: &[i64], b: &[i64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        if x != y {
            return x < y;
        }
    }
    false
}

/// Exact rank of a set of integer column vectors, by fraction-free
/// (Bareiss) elimination over `i128`. Intermediates are bounded by minors
/// of the input, far below overflow at the sizes used here.
pub fn int_rank(columns: &[IntVector]) -> usize {
    if columns.is_empty() {
        return 0;
    }
    let nr = columns[0].len();
    let nc = columns.len();
    let mut m: Vec<Vec<i128>> = (0..nr)
        .map(|r| columns.iter().map(|c| c[r] as i128).collect())
        .collect();

    let mut rank = 0;
    let mut prev: i128 = 1;
    let mut row = 0;
    for col in 0..nc {
        let Some(p) = (row..nr).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, p);
        let piv = m[row][col];
        for r in (row + 1)..nr {
            for c2 in (col + 1)..nc {
                let num = m[r][c2]
                    .checked_mul(piv)
                    .and_then(|x| m[r][col].checked_mul(m[row][c2]).map(|y| x - y))
                    .expect("rank elimination overflow");
                m[r][c2] = num / prev;
            }
            m[r][col] = 0;
        }
        prev = piv;
        rank += 1;
        row += 1;
        if row == nr {
            break;
        }
    }
    rank
}

/// True when `candidate` is linearly independent of the `prior` vectors
/// (exact integer check).
pub fn is_independent_of(prior: &[IntVector], candidate: &[i64]) -> bool {
    let mut cols: Vec<IntVector> = prior.to_vec();
    cols.push(candidate.to_vec());
    int_rank(&cols) == prior.len() + 1
}

/// Dense integer matrix with arbitrary-precision entries. Used wherever
/// exactness is non-negotiable: Hermite normal form, determinants of ECV
/// Gram matrices, and the scaled projector `det(A^T A) * F`.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn from_columns(rows: usize, columns: &[IntVector]) -> Self {
        let mut m = IntMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for i in 0..rows {
                m[(i, j)] = BigInt::from(col[i]);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn matmul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = &self[(i, k)];
                if aik.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = aik * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn mul_int_vec(&self, v: &[i64]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for j in 0..self.cols {
                    s += &self[(i, j)] * v[j];
                }
                s
            })
            .collect()
    }

    pub fn mul_big_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for j in 0..self.cols {
                    s += &self[(i, j)] * &v[j];
                }
                s
            })
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn column_is_zero(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self[(i, j)].is_zero())
    }

    /// Keep only the first `n` columns.
    pub fn take_columns(&self, n: usize) -> IntMatrix {
        assert!(n <= self.cols);
        let mut m = IntMatrix::zeros(self.rows, n);
        for i in 0..self.rows {
            for j in 0..n {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn swap_columns(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let ia = i * self.cols + a;
            let ib = i * self.cols + b;
            self.data.swap(ia, ib);
        }
    }

    pub fn negate_column(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    /// `col_dst += coeff * col_src`
    pub fn add_multiple_of_column(&mut self, dst: usize, src: usize, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = coeff * &self[(i, src)];
            self[(i, dst)] += add;
        }
    }

    /// Replace columns `a` and `b` with integer combinations
    /// `(ca*A + cb*B, da*A + db*B)`. The caller guarantees the 2x2
    /// coefficient matrix is unimodular.
    pub fn combine_columns(
        &mut self,
        a: usize,
        b: usize,
        ca: &BigInt,
        cb: &BigInt,
        da: &BigInt,
        db: &BigInt,
    ) {
        for i in 0..self.rows {
            let va = self[(i, a)].clone();
            let vb = self[(i, b)].clone();
            self[(i, a)] = ca * &va + cb * &vb;
            self[(i, b)] = da * &va + db * &vb;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.rows == self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self[(i, j)].clone()).collect())
            .collect();
        let mut sign = 1i64;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    /// Exact adjugate via cofactors: `self * adjugate = det * I`.
    pub fn adjugate(&self) -> IntMatrix {
        assert!(self.rows == self.cols);
        let n = self.rows;
        if n == 0 {
            return IntMatrix::zeros(0, 0);
        }
        if n == 1 {
            let mut m = IntMatrix::zeros(1, 1);
            m[(0, 0)] = BigInt::one();
            return m;
        }
        let mut adj = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j);
                let mut c = minor.determinant();
                if (i + j) % 2 == 1 {
                    c = -c;
                }
                adj[(j, i)] = c;
            }
        }
        adj
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let n = self.rows;
        let mut m = IntMatrix::zeros(n - 1, n - 1);
        let mut r = 0;
        for i in 0..n {
            if i == skip_row {
                continue;
            }
            let mut c = 0;
            for j in 0..n {
                if j == skip_col {
                    continue;
                }
                m[(r, c)] = self[(i, j)].clone();
                c += 1;
            }
            r += 1;
        }
        m
    }

    /// Convert to `f64` entries (exact for magnitudes below 2^53).
    pub fn to_real(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].to_f64().expect("bigint to f64");
            }
        }
        m
    }

    pub fn column_to_i64(&self, j: usize) -> IntVector {
        (0..self.rows)
            .map(|i| {
                self[(i, j)]
                    .to_i64()
                    .expect("integer matrix entry exceeds i64")
            })
            .collect()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_basics() {
        assert_eq!(int_rank(&[vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(int_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(int_rank(&[vec![0, 0, 0]]), 0);
        assert_eq!(
            int_rank(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]),
            2
        );
    }

    #[test]
    fn independence_filter() {
        let prior = vec![vec![1, 0]];
        assert!(!is_independent_of(&prior, &[2, 0]));
        assert!(is_independent_of(&prior, &[1, 1]));
        assert!(!is_independent_of(&prior, &[0, 0]));
    }

    #[test]
    fn canonical_sign_and_colex() {
        let mut v = vec![0, -2, 1];
        canonical_sign(&mut v);
        assert_eq!(v, vec![0, 2, -1]);

        // e1 ranks before e2 and e3
        assert!(colex_less(&[1, 0, 0], &[0, 1, 0]));
        assert!(colex_less(&[1, 0, 0], &[0, 0, 1]));
        assert!(colex_less(&[1, 0], &[1, 1]));
        assert!(!colex_less(&[1, 0], &[1, 0]));
    }

    #[test]
    fn determinant_and_adjugate() {
        let m = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 3]]);
        assert_eq!(m.determinant(), BigInt::from(5));
        let adj = m.adjugate();
        let prod = m.matmul(&adj);
        let expect = IntMatrix::identity(2).scale(&BigInt::from(5));
        assert_eq!(prod, expect);

        let singular = IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.determinant(), BigInt::zero());
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = IntMatrix::from_i64_rows(&[&[3, -1, 2], &[0, 4, 1], &[-2, 5, 0]]);
        // cofactor expansion along the first row: 3*(0-5) + 1*(0+2) + 2*(0+8)
        assert_eq!(m.determinant(), BigInt::from(-15 + 2 + 16));
        let adj = m.adjugate();
        let prod = m.matmul(&adj);
        assert_eq!(prod, IntMatrix::identity(3).scale(&m.determinant()));
    }
}
