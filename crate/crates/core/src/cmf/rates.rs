use crate::lattice::IntVector;
use crate::numerics::{norm_sq, Matrix, NumericsError, SpdMatrix};

/// SNR-normalized user-to-relay channel: `g_{ln} = h_{ln} * sqrt(gamma)`,
/// one row per user, one column per relay antenna.
#[derive(Clone, Debug)]
pub struct EffectiveChannel {
    g: Matrix,
}

impl EffectiveChannel {
    pub fn new(g: Matrix) -> Self {
        assert!(g.rows() >= 1 && g.cols() >= 1, "empty channel");
        assert!(g.all_finite(), "channel entries must be finite");
        EffectiveChannel { g }
    }

    /// Number of users L.
    pub fn users(&self) -> usize {
        self.g.rows()
    }

    /// Number of relay antennas N.
    pub fn antennas(&self) -> usize {
        self.g.cols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.g
    }
}

/// Computation rate from a quadratic-form value: `1/2 log2^+(1/v)`,
/// clamped at zero. Form values this close to zero only arise from
/// roundoff, so the floor just keeps the logarithm finite.
pub fn rate_from_form_value(v: f64) -> f64 {
    let v = v.max(1e-300);
    (0.5 * (1.0 / v).log2()).max(0.0)
}

/// Gram form of the single-equation problem: `Q = (I_L + G G^T)^{-1}`.
pub fn gram_std(ch: &EffectiveChannel) -> Result<SpdMatrix, NumericsError> {
    let l = ch.users();
    let g = ch.matrix();
    let m = Matrix::identity(l).add(&g.matmul(&g.transpose()));
    SpdMatrix::from_matrix(m)?.inverse()
}

/// Optimal antenna combining vector for a given ECV when no decoded
/// equations are available: `b = (I_N + G^T G)^{-1} G^T a`, the unique
/// minimizer of `||b||^2 + ||G b - a||^2`.
pub fn optimal_b_std(ch: &EffectiveChannel, a: &[i64]) -> Result<Vec<f64>, NumericsError> {
    let n = ch.antennas();
    let g = ch.matrix();
    let gtg = Matrix::identity(n).add(&g.gram());
    let af: Vec<f64> = a.iter().map(|&x| x as f64).collect();
    let rhs = g.transpose().mul_vec(&af);
    SpdMatrix::from_matrix(gtg)?.solve_vec(&rhs)
}

/// Computation rate of an equation with ECV `a`, combining the antenna
/// signals with `b` and the previously decoded equations (the `a_prior`
/// vectors) with `beta`:
/// `R = 1/2 log2^+( 1 / (||b||^2 + ||G b + A beta - a||^2) )`.
/// With empty `a_prior` and `beta` this is the single-equation rate.
pub fn rate_of(
    ch: &EffectiveChannel,
    b: &[f64],
    beta: &[f64],
    a_prior: &[IntVector],
    a: &[i64],
) -> f64 {
    assert_eq!(beta.len(), a_prior.len(), "combiner/prior length mismatch");
    assert!(a.iter().any(|&x| x != 0), "ECV must be nonzero");
    let g = ch.matrix();
    let mut mismatch = g.mul_vec(b);
    for (prior, &coef) in a_prior.iter().zip(beta) {
        for (m, &p) in mismatch.iter_mut().zip(prior) {
            *m += coef * p as f64;
        }
    }
    for (m, &ai) in mismatch.iter_mut().zip(a) {
        *m -= ai as f64;
    }
    let denom = norm_sq(b) + norm_sq(&mismatch);
    rate_from_form_value(denom)
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::EffectiveChannel;
    use crate::numerics::Matrix;
    use rand::rngs::StdRng;
    use rand_distr::{Distribution, StandardNormal};

    pub fn random_channel(l: usize, n: usize, gamma: f64, rng: &mut StdRng) -> EffectiveChannel {
        let mut g = Matrix::zeros(l, n);
        for i in 0..l {
            for j in 0..n {
                let h: f64 = StandardNormal.sample(rng);
                g[(i, j)] = h * gamma.sqrt();
            }
        }
        EffectiveChannel::new(g)
    }
}
