use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::intmat::IntMatrix;

/// Column-style Hermite normal form by unimodular column operations.
///
/// Returns `(h, u)` with `a * u = h` exactly and `|det u| = 1`. The form is
/// fixed as: nonzero columns packed on the left in a staircase (each pivot
/// strictly below the previous one), pivots positive, and entries to the
/// left of each pivot reduced into `[0, pivot)`. Zero columns collect on
/// the right. Exact integer arithmetic throughout.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.cols());
    let ncols = a.cols();
    let mut c = 0usize; // next pivot column

    for r in 0..a.rows() {
        if c == ncols {
            break;
        }
        // fold row-r entries of columns c.. into a single gcd at (r, c)
        for j in (c + 1)..ncols {
            if h[(r, j)].is_zero() {
                continue;
            }
            if h[(r, c)].is_zero() {
                h.swap_columns(c, j);
                u.swap_columns(c, j);
                continue;
            }
            let p = h[(r, c)].clone();
            let q = h[(r, j)].clone();
            if (&q % &p).is_zero() {
                // plain elementary operation keeps the transform small
                let coeff = -(&q / &p);
                h.add_multiple_of_column(j, c, &coeff);
                u.add_multiple_of_column(j, c, &coeff);
                continue;
            }
            let eg = p.extended_gcd(&q);
            // [x  -q/g]   applied on the right to columns (c, j):
            // [y   p/g]   new_c = x*C + y*J, new_j = -(q/g)*C + (p/g)*J
            let qg = &q / &eg.gcd;
            let pg = &p / &eg.gcd;
            h.combine_columns(c, j, &eg.x, &eg.y, &(-&qg), &pg);
            u.combine_columns(c, j, &eg.x, &eg.y, &(-&qg), &pg);
        }
        if h[(r, c)].is_zero() {
            continue; // row has no pivot
        }
        if h[(r, c)].is_negative() {
            h.negate_column(c);
            u.negate_column(c);
        }
        // reduce row-r entries of the columns left of the pivot into [0, pivot)
        let piv = h[(r, c)].clone();
        for i in 0..c {
            let q = h[(r, i)].div_floor(&piv);
            if !q.is_zero() {
                let coeff = -q;
                h.add_multiple_of_column(i, c, &coeff);
                u.add_multiple_of_column(i, c, &coeff);
            }
        }
        c += 1;
    }

    (h, u)
}
