//! Integer lattice machinery: shortest-vector enumeration over positive
//! definite Gram forms, Hermite normal form with its unimodular transform,
//! projection-lattice basis extraction, and exhaustive box-scan oracles used
//! by the test suites.

mod brute;
mod enumerate;
mod hnf;
mod intmat;
mod project;

pub use brute::{brute_force_svp, for_each_box_point, BOX_CELL_BUDGET};
pub use enumerate::{svp_enumerate, svp_enumerate_independent};
pub use hnf::hnf;
pub use intmat::{
    canonical_sign, colex_less, int_rank, is_independent_of, IntMatrix, IntVector,
};
pub use project::{project_basis, LatticeReduction};

use crate::numerics::NumericsError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeError {
    /// No nonzero admissible point lies within the supplied search radius.
    /// Signals a caller bound bug (or, for the independence-filtered search,
    /// a radius that must be enlarged).
    EmptyRadius,
    /// Integer columns are linearly dependent where independence is required.
    DependentColumns,
    /// An exhaustive box scan would exceed the cell budget.
    BoxTooLarge,
    /// A Gram form violated its positive-definiteness precondition.
    Numerics(NumericsError),
}

impl std::fmt::Display for LatticeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LatticeError::EmptyRadius => write!(f, "no nonzero lattice point within radius"),
            LatticeError::DependentColumns => write!(f, "integer columns are linearly dependent"),
            LatticeError::BoxTooLarge => write!(f, "enumeration box exceeds cell budget"),
            LatticeError::Numerics(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LatticeError {}

impl From<NumericsError> for LatticeError {
    fn from(e: NumericsError) -> Self {
        LatticeError::Numerics(e)
    }
}

/// Deterministic preference between candidate minimizers: lower form value
/// wins; within a hair of equality, the sign-canonicalized vector that is
/// smaller in the colex order wins. Both the sphere enumerators and the box
/// oracles funnel candidates through this single rule.
#[derive(Clone, Debug)]
pub(crate) struct BestCandidate {
    pub val: f64,
    pub vec: IntVector,
}

pub(crate) fn offer_candidate(best: &mut Option<BestCandidate>, val: f64, vec: &[i64]) {
    let mut canon = vec.to_vec();
    canonical_sign(&mut canon);
    match best {
        None => {
            *best = Some(BestCandidate { val, vec: canon });
        }
        Some(b) => {
            let eps = 1e-12 * b.val.abs().max(1.0);
            if val < b.val - eps {
                b.val = val;
                b.vec = canon;
            } else if val <= b.val + eps {
                if val < b.val {
                    b.val = val;
                }
                if colex_less(&canon, &b.vec) {
                    b.vec = canon;
                }
            }
        }
    }
}
