use super::matrix::Matrix;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
///
/// Converges quadratically; the matrices here are at most ~16x16, so a
/// generous sweep cap is effectively unreachable.
pub fn symmetric_eigenvalues(m: &Matrix) -> Vec<f64> {
    assert!(m.is_square(), "eigenvalues of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![m[(0, 0)]];
    }

    let mut a = m.clone();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let target = 1e-14 * scale;

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(a[(i, j)].abs());
            }
        }
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= target * 1e-2 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                // smaller-angle root for stability
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn diagonal_passthrough() {
        let m = Matrix::from_diagonal(&[5.0, -1.0, 2.0]);
        let e = symmetric_eigenvalues(&m);
        assert!((e[0] + 1.0).abs() < 1e-13);
        assert!((e[1] - 2.0).abs() < 1e-13);
        assert!((e[2] - 5.0).abs() < 1e-13);
    }

    #[test]
    fn known_2x2() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3
        let m = Matrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let e = symmetric_eigenvalues(&m);
        assert!((e[0] - 1.0).abs() < 1e-12);
        assert!((e[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn trace_and_norm_preserved() {
        let mut rng = StdRng::seed_from_u64(0xe16e);
        for _ in 0..100 {
            let n = 2 + rng.gen_range(0..10);
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let v = rng.gen_range(-3.0..3.0);
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
            let e = symmetric_eigenvalues(&m);
            let trace: f64 = (0..n).map(|i| m[(i, i)]).sum();
            let esum: f64 = e.iter().sum();
            assert!((trace - esum).abs() < 1e-10 * trace.abs().max(1.0));

            // Frobenius norm^2 equals sum of squared eigenvalues
            let fro: f64 = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| m[(i, j)] * m[(i, j)])
                .sum();
            let esq: f64 = e.iter().map(|x| x * x).sum();
            assert!((fro - esq).abs() < 1e-9 * fro.max(1.0));
        }
    }
}
