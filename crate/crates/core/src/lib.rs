//! Domain model for finite-domain Max CSP: bit-table predicates, constraint
//! languages, weighted instances, chains, and the relabelling / transposition
//! calculus on binary predicates.

mod chain;
mod endo;
mod error;
pub mod format;
mod instance;
mod language;
mod predicate;
pub mod reference;
pub mod standard;
mod symmetry;

pub use chain::Chain;
pub use endo::{core_of, endomorphisms, Core, DEFAULT_ENDOMORPHISM_BOUND};
pub use error::CoreError;
pub use instance::{Assignment, CompiledConstraint, Constraint, Instance};
pub use language::ConstraintLanguage;
pub use predicate::{decode_into, transform_predicate, Predicate, Restricted, Transform};
pub use standard::{build_standard_predicate, StandardKind};
pub use symmetry::{canonical_class, canonical_pair, canonical_pair_with, CanonicalForm, CanonicalPair};

/// Evaluates `f` on `tuple`, checking arity and range.
pub fn eval_predicate(f: &Predicate, tuple: &[usize]) -> Result<bool, CoreError> {
    f.eval(tuple)
}
