use super::rates::{gram_std, rate_from_form_value, EffectiveChannel};
use super::schemes::CmfError;
use crate::lattice::{
    colex_less, for_each_box_point, is_independent_of, offer_candidate, IntVector, LatticeError,
};
use crate::numerics::{quadratic_form, Matrix};

/// Joint-selection sum rate over a box: maximize, over full-rank sets of L
/// nonzero ECVs, the minimum per-equation rate. Since only the worst
/// selected value matters, sorting all candidates by `a^T Q a` ascending
/// and greedily keeping independent ones is exactly optimal. Combinatorial
/// oracle; keep L small.
pub fn iflr_oracle(ch: &EffectiveChannel, bound: i64) -> Result<f64, CmfError> {
    let l = ch.users();
    let q = gram_std(ch)?;

    let mut candidates: Vec<(f64, IntVector)> = Vec::new();
    for_each_box_point(l, bound, |point| {
        if point.iter().all(|&x| x == 0) {
            return;
        }
        // one representative per +-pair
        if point.iter().find(|&&x| x != 0).copied().unwrap_or(0) < 0 {
            return;
        }
        let xf: Vec<f64> = point.iter().map(|&x| x as f64).collect();
        candidates.push((quadratic_form(q.as_matrix(), &xf), point.to_vec()));
    })
    .map_err(CmfError::from)?;

    candidates.sort_by(|(va, aa), (vb, ab)| {
        va.partial_cmp(vb)
            .unwrap()
            .then_with(|| {
                if colex_less(aa, ab) {
                    std::cmp::Ordering::Less
                } else if colex_less(ab, aa) {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            })
    });

    let mut chosen: Vec<IntVector> = Vec::with_capacity(l);
    let mut worst = 0.0f64;
    for (val, a) in candidates {
        if is_independent_of(&chosen, &a) {
            worst = val;
            chosen.push(a);
            if chosen.len() == l {
                break;
            }
        }
    }
    assert_eq!(chosen.len(), l, "box always contains the unit vectors");
    Ok(l as f64 * rate_from_form_value(worst))
}

/// Direct constrained minimization of a positive semi-definite quadratic
/// form over the independence-filtered box: the reference every reduced
/// step optimization is checked against.
pub fn psd_constrained_min(
    gram: &Matrix,
    prior: &[IntVector],
    bound: i64,
) -> Result<(IntVector, f64), LatticeError> {
    assert!(gram.is_square());
    let n = gram.rows();
    let mut best = None;
    for_each_box_point(n, bound, |point| {
        if point.iter().all(|&x| x == 0) {
            return;
        }
        if !is_independent_of(prior, point) {
            return;
        }
        let xf: Vec<f64> = point.iter().map(|&x| x as f64).collect();
        offer_candidate(&mut best, quadratic_form(gram, &xf), point);
    })?;
    match best {
        Some(b) => Ok((b.vec, b.val)),
        None => Err(LatticeError::EmptyRadius),
    }
}
