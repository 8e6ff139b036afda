//! Supermodularity of predicates on chains, common chains for languages,
//! and the dichotomy classifier for languages with all fixed values.

mod chain_check;
mod classify;
mod error;
mod strip;

pub use chain_check::{
    binary_slices, is_supermodular_on_chain, is_supermodular_via_slices, supermodular_chains, supermodular_violation,
    Slice, SupermodCheck, Violation,
};
pub use classify::{
    classify_with_fixed_values, condition_star, find_common_chain, verify_witness, ClassificationReport,
    HardnessWitness, SliceProvenance, Verdict,
};
pub use error::SupermodError;
pub use strip::{strip_all_ones, StripStep, Stripped};
