use num_traits::ToPrimitive;

use super::rates::{gram_std, optimal_b_std, rate_from_form_value, EffectiveChannel};
use crate::lattice::{
    int_rank, is_independent_of, project_basis, svp_enumerate, svp_enumerate_independent,
    IntMatrix, IntVector, LatticeError, LatticeReduction,
};
use crate::numerics::{quadratic_form, Matrix, NumericsError, ProjectionMatrix, SpdMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmfError {
    Lattice(LatticeError),
    Numerics(NumericsError),
}

impl std::fmt::Display for CmfError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmfError::Lattice(e) => write!(f, "{e}"),
            CmfError::Numerics(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CmfError {}

impl From<LatticeError> for CmfError {
    fn from(e: LatticeError) -> Self {
        CmfError::Lattice(e)
    }
}

impl From<NumericsError> for CmfError {
    fn from(e: NumericsError) -> Self {
        CmfError::Numerics(e)
    }
}

/// Combining coefficients of one decoding step: `b` weights the normalized
/// antenna signals, `beta` weights the previously decoded equations.
#[derive(Clone, Debug)]
pub struct StepCombiner {
    pub b: Vec<f64>,
    pub beta: Vec<f64>,
}

/// Result of running a computing scheme at one relay: L linearly
/// independent ECVs in decoding order with their rates and combiners.
#[derive(Clone, Debug)]
pub struct ComputingOutcome {
    /// ECVs `a_1..a_L`, exact integer rank L.
    pub ecvs: Vec<IntVector>,
    /// Scheme-defined per-step rates, non-increasing in k. For the
    /// successive scheme these are the running minima of the raw rates.
    pub step_rates: Vec<f64>,
    /// Raw per-step rates `R_j(G, a_j)`, kept for diagnostics.
    pub raw_step_rates: Vec<f64>,
    pub combiners: Vec<StepCombiner>,
    /// Minimum rate over the L steps; the whole message set is recoverable
    /// at this rate.
    pub rho: f64,
    /// `L * rho`, in bits per channel use.
    pub sum_rate: f64,
}

impl ComputingOutcome {
    pub fn users(&self) -> usize {
        self.ecvs.len()
    }

    /// Exact integer rank check over the collected ECVs.
    pub fn has_full_rank(&self) -> bool {
        int_rank(&self.ecvs) == self.ecvs.len()
    }
}

/// Enlarge the search radius geometrically when every point inside was
/// filtered out (all dependent on the priors). The minimum-eigenvalue
/// bound only covers positive-rate vectors, so a valid independent ECV may
/// lie beyond the initial radius.
const MAX_RADIUS_DOUBLINGS: u32 = 20;

fn enumerate_with_retry(
    gram: &SpdMatrix,
    prior: &[IntVector],
    initial_radius: f64,
) -> Result<(IntVector, f64), CmfError> {
    let mut radius = initial_radius;
    for _ in 0..=MAX_RADIUS_DOUBLINGS {
        let attempt = if prior.is_empty() {
            svp_enumerate(gram, radius)
        } else {
            svp_enumerate_independent(gram, prior, radius)
        };
        match attempt {
            Ok(found) => return Ok(found),
            Err(LatticeError::EmptyRadius) => radius *= 2.0,
            Err(e) => return Err(e.into()),
        }
    }
    Err(CmfError::Lattice(LatticeError::EmptyRadius))
}

fn min_diagonal(q: &SpdMatrix) -> f64 {
    (0..q.dim())
        .map(|i| q.as_matrix()[(i, i)])
        .fold(f64::MAX, f64::min)
}

/// Standard computing: the single best ECV and its rate,
/// `argmin a^T Q a` over nonzero integer vectors.
pub fn std_cm(ch: &EffectiveChannel) -> Result<(IntVector, f64), CmfError> {
    let q = gram_std(ch)?;
    let (a, val) = enumerate_with_retry(&q, &[], min_diagonal(&q))?;
    Ok((a, rate_from_form_value(val)))
}

/// Extended computing: L sequentially chosen ECVs, each the best vector
/// linearly independent of its predecessors under the same Gram form.
/// Step rates are non-increasing by construction.
pub fn ext_cm(ch: &EffectiveChannel) -> Result<ComputingOutcome, CmfError> {
    let l = ch.users();
    let q = gram_std(ch)?;
    let initial_radius = min_diagonal(&q);

    let mut ecvs: Vec<IntVector> = Vec::with_capacity(l);
    let mut raw_step_rates = Vec::with_capacity(l);
    let mut combiners = Vec::with_capacity(l);
    for _ in 0..l {
        let (a, val) = enumerate_with_retry(&q, &ecvs, initial_radius)?;
        raw_step_rates.push(rate_from_form_value(val));
        combiners.push(StepCombiner {
            b: optimal_b_std(ch, &a)?,
            beta: Vec::new(),
        });
        ecvs.push(a);
    }

    let rho = raw_step_rates.iter().copied().fold(f64::MAX, f64::min);
    Ok(ComputingOutcome {
        step_rates: raw_step_rates.clone(),
        raw_step_rates,
        combiners,
        rho,
        sum_rate: l as f64 * rho,
        ecvs,
    })
}

/// Per-step working set of the successive scheme: the prior ECVs, the
/// projector onto their orthogonal complement, the projected channel and
/// its Gram inverse, and the projection-lattice reduction used to turn the
/// semi-definite step problem into a positive definite one.
#[derive(Clone, Debug)]
pub struct SucStepState {
    /// Step index k (1-based).
    pub step: usize,
    /// `A_{k-1}`, the prior ECVs as columns.
    pub a_prior: IntMatrix,
    /// `F_{k-1}`, projector onto the complement of the prior span.
    pub f_proj: ProjectionMatrix,
    /// `G~_k = F_{k-1} G`.
    pub g_tilde: Matrix,
    /// `C_k = (I_L + G~_k G~_k^T)^{-1}`.
    pub c_k: SpdMatrix,
    /// Projection-lattice basis and its unimodular lift.
    pub reduction: LatticeReduction,
}

impl SucStepState {
    pub fn new(ch: &EffectiveChannel, prior: &[IntVector]) -> Result<Self, CmfError> {
        let l = ch.users();
        assert!(prior.len() < l, "no steps remain");
        let a_prior = IntMatrix::from_columns(l, prior);
        let f_proj = ProjectionMatrix::complement_of(&a_prior.to_real())?;
        let g_tilde = f_proj.as_matrix().matmul(ch.matrix());
        let c_k = SpdMatrix::from_matrix(
            Matrix::identity(l)
                .add(&g_tilde.matmul(&g_tilde.transpose()))
                .symmetrized(),
        )?
        .inverse()?;
        let reduction = project_basis(&a_prior, l)?;
        Ok(SucStepState {
            step: prior.len() + 1,
            a_prior,
            f_proj,
            g_tilde,
            c_k,
            reduction,
        })
    }

    /// Gram form of the reduced step problem, `Q~_k = P~^T C_k P~`
    /// (positive definite, dimension L-k+1).
    pub fn reduced_gram(&self) -> Result<SpdMatrix, NumericsError> {
        let p = &self.reduction.basis;
        let m = p
            .transpose()
            .matmul(self.c_k.as_matrix())
            .matmul(p)
            .symmetrized();
        SpdMatrix::from_matrix(m)
    }

    /// Gram form over the original coordinates, `Q_k = F^T C_k F`
    /// (positive semi-definite; vanishes exactly on the prior span).
    pub fn full_gram(&self) -> Matrix {
        let f = self.f_proj.as_matrix();
        f.transpose()
            .matmul(self.c_k.as_matrix())
            .matmul(f)
            .symmetrized()
    }
}

/// One step of the successive scheme.
#[derive(Clone, Debug)]
pub struct SucStep {
    pub ecv: IntVector,
    pub combiner: StepCombiner,
    /// Raw rate of this step's equation, `1/2 log2^+(1 / a^T Q_k a)`.
    pub rate: f64,
}

/// Gram form of the step problem for a given prior set, over the original
/// coordinates: `Q_k = F^T (I_L + G~ G~^T)^{-1} F` with `G~ = F G`.
/// Positive semi-definite; vanishes exactly on the prior span.
pub fn step_gram(ch: &EffectiveChannel, prior: &[IntVector]) -> Result<Matrix, CmfError> {
    let l = ch.users();
    let a_prior = IntMatrix::from_columns(l, prior);
    let f_proj = ProjectionMatrix::complement_of(&a_prior.to_real())?;
    let f = f_proj.as_matrix();
    let g_tilde = f.matmul(ch.matrix());
    let c = SpdMatrix::from_matrix(
        Matrix::identity(l)
            .add(&g_tilde.matmul(&g_tilde.transpose()))
            .symmetrized(),
    )?
    .inverse()?;
    Ok(f.transpose().matmul(c.as_matrix()).matmul(f).symmetrized())
}

/// Closed-form optimal combining coefficients for decoding the equation
/// with ECV `a` when the equations with the `prior` ECVs have already been
/// decoded: `b = (I_N + G~^T G~)^{-1} G~^T a` and
/// `beta = (A^T A)^{-1} A^T (a - G b)`. The unique minimizer of
/// `||b||^2 + ||G b + A beta - a||^2`.
pub fn optimal_combiner(
    ch: &EffectiveChannel,
    prior: &[IntVector],
    a: &[i64],
) -> Result<StepCombiner, CmfError> {
    let a_prior = IntMatrix::from_columns(ch.users(), prior);
    let f_proj = ProjectionMatrix::complement_of(&a_prior.to_real())?;
    let g_tilde = f_proj.as_matrix().matmul(ch.matrix());
    combiner_from_parts(ch, &a_prior, &g_tilde, a)
}

fn combiner_from_parts(
    ch: &EffectiveChannel,
    a_prior: &IntMatrix,
    g_tilde: &Matrix,
    a: &[i64],
) -> Result<StepCombiner, CmfError> {
    let n = ch.antennas();
    let af: Vec<f64> = a.iter().map(|&x| x as f64).collect();
    let b = SpdMatrix::from_matrix(Matrix::identity(n).add(&g_tilde.gram()).symmetrized())?
        .solve_vec(&g_tilde.transpose().mul_vec(&af))?;
    let beta = if a_prior.cols() == 0 {
        Vec::new()
    } else {
        let a_real = a_prior.to_real();
        let gb = ch.matrix().mul_vec(&b);
        let residual: Vec<f64> = af.iter().zip(&gb).map(|(x, y)| x - y).collect();
        SpdMatrix::from_matrix(a_real.gram())?.solve_vec(&a_real.transpose().mul_vec(&residual))?
    };
    Ok(StepCombiner { b, beta })
}

/// Find the k-th ECV by solving the reduced positive definite problem
/// `min_w w^T Q~_k w` and lifting `a_k = U_{k-1} w_k`, then derive the
/// closed-form combiners and the step rate.
pub fn suc_cm_step(ch: &EffectiveChannel, state: &SucStepState) -> Result<SucStep, CmfError> {
    let reduced = state.reduced_gram()?;
    // Every vector with positive rate satisfies ||w||^2 < 1/lambda_min, and
    // some projected unit vector has form value at most one, so this radius
    // always contains the optimum.
    let initial_radius = 1.0 / reduced.min_eigenvalue();
    let (w, _) = enumerate_with_retry(&reduced, &[], initial_radius)?;

    let ecv: IntVector = state
        .reduction
        .lift
        .mul_int_vec(&w)
        .into_iter()
        .map(|x| x.to_i64().expect("lifted ECV entry exceeds i64"))
        .collect();
    debug_assert!(ecv.iter().any(|&x| x != 0));

    let af: Vec<f64> = ecv.iter().map(|&x| x as f64).collect();
    let rate = rate_from_form_value(quadratic_form(&state.full_gram(), &af));
    let combiner = combiner_from_parts(ch, &state.a_prior, &state.g_tilde, &ecv)?;

    Ok(SucStep {
        ecv,
        combiner,
        rate,
    })
}

/// Successive computing: L steps of `suc_cm_step`, each reusing the
/// previously decoded equations. Reported step rates are the running
/// minima of the raw step rates; a zero-rate step does not stop the
/// scheme, it simply pins the frame in outage for any positive target.
pub fn suc_cm(ch: &EffectiveChannel) -> Result<ComputingOutcome, CmfError> {
    let l = ch.users();
    let mut ecvs: Vec<IntVector> = Vec::with_capacity(l);
    let mut raw_step_rates = Vec::with_capacity(l);
    let mut step_rates = Vec::with_capacity(l);
    let mut combiners = Vec::with_capacity(l);

    for _ in 0..l {
        let state = SucStepState::new(ch, &ecvs)?;
        let step = suc_cm_step(ch, &state)?;
        debug_assert!(is_independent_of(&ecvs, &step.ecv));
        let cumulative = step_rates
            .last()
            .copied()
            .unwrap_or(f64::MAX)
            .min(step.rate);
        raw_step_rates.push(step.rate);
        step_rates.push(cumulative);
        combiners.push(step.combiner);
        ecvs.push(step.ecv);
    }

    let rho = *step_rates.last().expect("at least one step");
    Ok(ComputingOutcome {
        ecvs,
        step_rates,
        raw_step_rates,
        combiners,
        rho,
        sum_rate: l as f64 * rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmf::oracle::{iflr_oracle, psd_constrained_min};
    use crate::cmf::rates::rate_of;
    use crate::cmf::rates::test_support::random_channel;
    use crate::lattice::brute_force_svp;
    use crate::numerics::norm_sq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn std_cm_strong_diagonal() {
        let ch = EffectiveChannel::new(Matrix::identity(2).scale(10.0));
        let (a, rate) = std_cm(&ch).unwrap();
        assert_eq!(a.iter().map(|x| x.abs()).sum::<i64>(), 1);
        assert!((rate - 0.5 * 101f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn std_cm_zero_channel() {
        let ch = EffectiveChannel::new(Matrix::zeros(2, 2));
        let (a, rate) = std_cm(&ch).unwrap();
        assert_eq!(a, vec![1, 0]);
        assert_eq!(rate, 0.0);
    }

    #[test]
    fn std_cm_matches_brute_force() {
        let mut rng = StdRng::seed_from_u64(0x57d);
        for _ in 0..100 {
            let ch = random_channel(2, 2, 10.0, &mut rng);
            let q = gram_std(&ch).unwrap();
            let (_, rate) = std_cm(&ch).unwrap();
            let (_, val) = brute_force_svp(&q, 10, None).unwrap();
            assert!((rate - rate_from_form_value(val)).abs() < 1e-9);
        }
    }

    #[test]
    fn ext_cm_symmetric_channel() {
        let g = 2.0;
        let ch = EffectiveChannel::new(Matrix::identity(3).scale(g));
        let out = ext_cm(&ch).unwrap();
        let expect = 0.5 * (1.0 + g * g).log2();
        for r in &out.step_rates {
            assert!((r - expect).abs() < 1e-9);
        }
        assert!(out.has_full_rank());
        for a in &out.ecvs {
            assert_eq!(a.iter().map(|x| x.abs()).sum::<i64>(), 1);
        }
        assert!((out.sum_rate - 3.0 * expect).abs() < 1e-9);
    }

    #[test]
    fn ext_cm_zero_channel() {
        let ch = EffectiveChannel::new(Matrix::zeros(3, 2));
        let out = ext_cm(&ch).unwrap();
        assert!(out.step_rates.iter().all(|&r| r == 0.0));
        assert!(out.has_full_rank());
        assert_eq!(out.sum_rate, 0.0);
    }

    #[test]
    fn ext_cm_monotone_rates() {
        let mut rng = StdRng::seed_from_u64(0xe27);
        for _ in 0..50 {
            let ch = random_channel(3, 3, 10.0, &mut rng);
            let out = ext_cm(&ch).unwrap();
            for w in out.step_rates.windows(2) {
                assert!(w[1] <= w[0] + 1e-12);
            }
        }
    }

    #[test]
    fn ext_cm_sum_rate_equals_joint_selection() {
        let mut rng = StdRng::seed_from_u64(0x1f1);
        for _ in 0..50 {
            let ch = random_channel(2, 2, 10.0, &mut rng);
            let out = ext_cm(&ch).unwrap();
            let max_entry = out
                .ecvs
                .iter()
                .flat_map(|a| a.iter().map(|x| x.abs()))
                .max()
                .unwrap();
            let sum = iflr_oracle(&ch, max_entry.max(8)).unwrap();
            assert!(
                (out.sum_rate - sum).abs() < 1e-9,
                "sequential {} vs joint {}",
                out.sum_rate,
                sum
            );
        }
    }

    #[test]
    fn suc_first_step_equals_std() {
        let mut rng = StdRng::seed_from_u64(0x5a1);
        for _ in 0..30 {
            let ch = random_channel(3, 3, 10.0, &mut rng);
            let (a_std, r_std) = std_cm(&ch).unwrap();
            let state = SucStepState::new(&ch, &[]).unwrap();
            let step = suc_cm_step(&ch, &state).unwrap();
            assert_eq!(step.ecv, a_std);
            assert!((step.rate - r_std).abs() < 1e-9);
        }
    }

    #[test]
    fn suc_symmetric_channel_matches_ext() {
        let g = 2.0;
        let ch = EffectiveChannel::new(Matrix::identity(3).scale(g));
        let ext = ext_cm(&ch).unwrap();
        let suc = suc_cm(&ch).unwrap();
        assert_eq!(ext.ecvs, suc.ecvs);
        for (a, b) in ext.step_rates.iter().zip(&suc.step_rates) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn suc_zero_channel() {
        let ch = EffectiveChannel::new(Matrix::zeros(3, 3));
        let out = suc_cm(&ch).unwrap();
        assert!(out.step_rates.iter().all(|&r| r == 0.0));
        assert!(out.has_full_rank());
    }

    #[test]
    fn suc_diagonal_second_step() {
        // prior e1 with diagonal G: the next ECV is +-e2 and the previous
        // equation needs no weight since nothing leaks into e1
        let ch = EffectiveChannel::new(Matrix::from_diagonal(&[3.0, 2.0]));
        let state = SucStepState::new(&ch, &[vec![1, 0]]).unwrap();
        let step = suc_cm_step(&ch, &state).unwrap();
        assert_eq!(step.ecv[0].abs(), 0);
        assert_eq!(step.ecv[1].abs(), 1);
        let expect = 0.5 * (1.0 + 4.0f64).log2();
        assert!((step.rate - expect).abs() < 1e-9);
        let r = rate_of(
            &ch,
            &step.combiner.b,
            &step.combiner.beta,
            &[vec![1, 0]],
            &step.ecv,
        );
        assert!((r - step.rate).abs() < 1e-9);
    }

    #[test]
    fn single_user_degenerate_case() {
        let ch = EffectiveChannel::new(Matrix::from_rows(&[&[2.0, -1.0]]));
        let ext = ext_cm(&ch).unwrap();
        let suc = suc_cm(&ch).unwrap();
        assert_eq!(ext.ecvs, vec![vec![1]]);
        assert_eq!(suc.ecvs, vec![vec![1]]);
        let expect = 0.5 * (1.0 + 5.0f64).log2();
        assert!((ext.rho - expect).abs() < 1e-12);
        assert!((suc.rho - expect).abs() < 1e-12);
    }

    #[test]
    fn suc_dominates_ext_sum_rate() {
        let mut rng = StdRng::seed_from_u64(0xd0a);
        for _ in 0..100 {
            let ch = random_channel(4, 4, 10.0, &mut rng);
            let ext = ext_cm(&ch).unwrap();
            let suc = suc_cm(&ch).unwrap();
            assert!(
                suc.sum_rate >= ext.sum_rate - 1e-9,
                "suc {} < ext {}",
                suc.sum_rate,
                ext.sum_rate
            );
        }
    }

    #[test]
    fn combiner_rate_matches_form_rate() {
        // the closed-form combiners achieve exactly the quadratic-form rate
        let mut rng = StdRng::seed_from_u64(0xc02);
        for _ in 0..50 {
            let ch = random_channel(3, 3, 10.0, &mut rng);
            let out = suc_cm(&ch).unwrap();
            for k in 0..out.users() {
                let prior = &out.ecvs[..k];
                let r = rate_of(
                    &ch,
                    &out.combiners[k].b,
                    &out.combiners[k].beta,
                    prior,
                    &out.ecvs[k],
                );
                assert!(
                    (r - out.raw_step_rates[k]).abs() < 1e-9,
                    "step {k}: combiner rate {r} vs form rate {}",
                    out.raw_step_rates[k]
                );
            }
        }
    }

    #[test]
    fn step_gram_is_psd_and_annihilates_priors() {
        let mut rng = StdRng::seed_from_u64(0x95d);
        for _ in 0..30 {
            let ch = random_channel(3, 3, 10.0, &mut rng);
            let out = suc_cm(&ch).unwrap();
            for k in 1..out.users() {
                let state = SucStepState::new(&ch, &out.ecvs[..k]).unwrap();
                let qk = state.full_gram();
                let eig = crate::numerics::symmetric_eigenvalues(&qk);
                assert!(eig[0] >= -1e-10, "negative eigenvalue {}", eig[0]);
                // semi-definite, not definite: the prior directions vanish
                assert!(eig[0] <= 1e-10);
                for a in &out.ecvs[..k] {
                    let af: Vec<f64> = a.iter().map(|&x| x as f64).collect();
                    assert!(quadratic_form(&qk, &af).abs() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn reduced_step_matches_direct_enumeration() {
        let mut rng = StdRng::seed_from_u64(0x7e3);
        for _ in 0..30 {
            let ch = random_channel(3, 3, 10.0, &mut rng);
            let out = suc_cm(&ch).unwrap();
            for k in 0..out.users() {
                let state = SucStepState::new(&ch, &out.ecvs[..k]).unwrap();
                let qk = state.full_gram();
                let bound = out.ecvs[k].iter().map(|x| x.abs()).max().unwrap().max(6);
                let (_, val) = psd_constrained_min(&qk, &out.ecvs[..k], bound).unwrap();
                let reduced_rate = out.raw_step_rates[k];
                assert!(
                    (rate_from_form_value(val) - reduced_rate).abs() < 1e-9,
                    "step {k}: direct {} vs reduced {}",
                    rate_from_form_value(val),
                    reduced_rate
                );
            }
        }
    }

    #[test]
    fn combiners_minimize_objective() {
        let mut rng = StdRng::seed_from_u64(0x7e2);
        for _ in 0..20 {
            let ch = random_channel(3, 3, 10.0, &mut rng);
            let out = suc_cm(&ch).unwrap();
            let k = 2;
            let prior = &out.ecvs[..k];
            let a = &out.ecvs[k];
            let objective = |b: &[f64], beta: &[f64]| {
                let mut mis = ch.matrix().mul_vec(b);
                for (p, &c) in prior.iter().zip(beta) {
                    for (m, &pi) in mis.iter_mut().zip(p) {
                        *m += c * pi as f64;
                    }
                }
                for (m, &ai) in mis.iter_mut().zip(a) {
                    *m -= ai as f64;
                }
                norm_sq(b) + norm_sq(&mis)
            };
            let b0 = &out.combiners[k].b;
            let beta0 = &out.combiners[k].beta;
            let f0 = objective(b0, beta0);
            for _ in 0..200 {
                let b: Vec<f64> = b0.iter().map(|x| x + rng.gen_range(-1e-3..1e-3)).collect();
                let beta: Vec<f64> = beta0
                    .iter()
                    .map(|x| x + rng.gen_range(-1e-3..1e-3))
                    .collect();
                assert!(objective(&b, &beta) >= f0);
            }
        }
    }
}
