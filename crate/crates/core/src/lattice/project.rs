use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::hnf::hnf;
use super::intmat::IntMatrix;
use super::LatticeError;
use crate::numerics::Matrix;

/// Standard generator of the projection lattice: the image of `Z^L` under
/// projection onto the orthogonal complement of a set of prior ECVs, as a
/// real basis with independent columns plus the integer lift that produces
/// it (`basis = F * lift` where `F` is the projector).
#[derive(Clone, Debug)]
pub struct LatticeReduction {
    /// `L x (L-k+1)` real basis with linearly independent columns.
    pub basis: Matrix,
    /// Columns of a unimodular matrix; `basis` is the projection of these.
    pub lift: IntMatrix,
}

/// Extract a standard generator matrix for the projection lattice from the
/// exact scaled projector `d*F = d*I - A adj(A^T A) A^T`, `d = det(A^T A)`:
/// its Hermite normal form's nonzero columns, divided by `d`, together with
/// the matching transform columns. With no priors this is the identity pair.
pub fn project_basis(a_prior: &IntMatrix, dim: usize) -> Result<LatticeReduction, LatticeError> {
    assert_eq!(a_prior.rows(), dim, "prior columns have wrong dimension");
    let k_minus_1 = a_prior.cols();
    assert!(k_minus_1 < dim, "too many prior columns");

    if k_minus_1 == 0 {
        return Ok(LatticeReduction {
            basis: Matrix::identity(dim),
            lift: IntMatrix::identity(dim),
        });
    }

    let gram = a_prior.transpose().matmul(a_prior);
    let d = gram.determinant();
    if d.is_zero() {
        return Err(LatticeError::DependentColumns);
    }
    debug_assert!(d.is_positive(), "Gram determinant must be positive");

    // d*F = d*I - A adj(A^T A) A^T, exactly
    let adj = gram.adjugate();
    let scaled_projector = IntMatrix::identity(dim)
        .scale(&d)
        .sub(&a_prior.matmul(&adj).matmul(&a_prior.transpose()));

    let (h, u) = hnf(&scaled_projector);

    let rank = dim - k_minus_1;
    let nonzero = (0..h.cols()).take_while(|&j| !h.column_is_zero(j)).count();
    debug_assert_eq!(nonzero, rank, "unexpected projection lattice rank");

    let d_f64 = d.to_f64().expect("Gram determinant to f64");
    let mut basis = Matrix::zeros(dim, rank);
    for i in 0..dim {
        for j in 0..rank {
            basis[(i, j)] = big_to_f64(&h[(i, j)]) / d_f64;
        }
    }

    // The HNF transform can carry large entries. Babai-reduce each kept
    // column against the prior sublattice: subtracting integer prior
    // combinations leaves its projection (and so the basis) unchanged and
    // keeps the lifted ECVs small. The reduced columns still extend to a
    // unimodular matrix because the dropped transform columns form a basis
    // of span(A) over the integers.
    let mut lift = u.take_columns(rank);
    let at = a_prior.transpose();
    for j in 0..rank {
        let col = lift.column(j);
        let coeffs: Vec<BigInt> = adj
            .mul_big_vec(&at.mul_big_vec(&col))
            .into_iter()
            .map(|num| div_round_half_down(&num, &d))
            .collect();
        let correction = a_prior.mul_big_vec(&coeffs);
        for i in 0..dim {
            let v = &lift[(i, j)] - &correction[i];
            lift[(i, j)] = v;
        }
    }

    Ok(LatticeReduction { basis, lift })
}

/// Round `num / den` (den > 0) to the nearest integer, halves toward
/// negative infinity.
fn div_round_half_down(num: &BigInt, den: &BigInt) -> BigInt {
    use num_integer::Integer;
    let (q, r) = num.div_mod_floor(den);
    if &(r * 2) > den {
        q + 1
    } else {
        q
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().expect("bigint to f64")
}
