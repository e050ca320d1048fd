//! The computing schemes run inside a relay: standard (one equation),
//! extended (L sequentially chosen independent equations), and successive
//! (reuse of already-decoded equations to cancel interference), together
//! with their closed-form combining vectors, rate bookkeeping, and the
//! brute-force joint-selection oracle used for testing.

mod oracle;
mod rates;
mod schemes;

pub use oracle::{iflr_oracle, psd_constrained_min};
pub use rates::{gram_std, optimal_b_std, rate_from_form_value, rate_of, EffectiveChannel};
pub use schemes::{
    ext_cm, optimal_combiner, std_cm, step_gram, suc_cm, suc_cm_step, CmfError, ComputingOutcome,
    StepCombiner, SucStep, SucStepState,
};
