use super::intmat::{is_independent_of, IntVector};
use super::{offer_candidate, LatticeError};
use crate::numerics::{quadratic_form, SpdMatrix};

/// Cells an exhaustive box scan may visit before `BoxTooLarge`.
pub const BOX_CELL_BUDGET: u128 = 100_000_000;

/// Visit every integer point of the box `|a_i| <= bound` in a fixed
/// odometer order. Shared by the oracles so they all see identical
/// candidate streams.
pub fn for_each_box_point<F: FnMut(&[i64])>(
    dim: usize,
    bound: i64,
    mut f: F,
) -> Result<(), LatticeError> {
    assert!(bound >= 1);
    let side = 2 * bound as u128 + 1;
    let mut cells: u128 = 1;
    for _ in 0..dim {
        cells = cells.saturating_mul(side);
        if cells > BOX_CELL_BUDGET {
            return Err(LatticeError::BoxTooLarge);
        }
    }

    let mut point = vec![-bound; dim];
    loop {
        f(&point);
        let mut i = 0;
        loop {
            if i == dim {
                return Ok(());
            }
            if point[i] < bound {
                point[i] += 1;
                break;
            }
            point[i] = -bound;
            i += 1;
        }
    }
}

/// Exhaustive shortest-vector search over the box `|a_i| <= bound`,
/// with the same independence filter and tie-break rule as the sphere
/// enumerators. Test oracle; keep the dimension small.
pub fn brute_force_svp(
    gram: &SpdMatrix,
    bound: i64,
    prior: Option<&[IntVector]>,
) -> Result<(IntVector, f64), LatticeError> {
    let n = gram.dim();
    let mut best = None;
    for_each_box_point(n, bound, |point| {
        if point.iter().all(|&x| x == 0) {
            return;
        }
        if let Some(prior) = prior {
            if !is_independent_of(prior, point) {
                return;
            }
        }
        let xf: Vec<f64> = point.iter().map(|&x| x as f64).collect();
        let val = quadratic_form(gram.as_matrix(), &xf);
        offer_candidate(&mut best, val, point);
    })?;
    match best {
        Some(b) => Ok((b.vec, b.val)),
        None => Err(LatticeError::EmptyRadius),
    }
}
