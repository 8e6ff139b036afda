//! Strict α-implementations: exhaustive verification, builders for the
//! standard reductions, bounded search, the shipped catalog, and the
//! instance-level replacement and domain-lifting transforms.

mod builders;
mod catalog;
mod error;
mod implementation;
mod search;
mod transform;

pub use builders::{binarize, lr_normalize, relabel, unary_decomposition, LrNormalization};
pub use catalog::{
    appendix_c_pair, appendix_catalog, catalog_entry, check_consequence, check_item, verify_catalog, CatalogItemReport,
    CatalogReport, ConsequenceCheck,
};
pub use error::ImplError;
pub use implementation::{
    verify_strict_implementation, Consequence, ImplConstraint, PredRef, StrictImplementation, VerifyFailure,
    VerifyReport, VERIFY_LIMIT,
};
pub use search::{search_strict_implementation, SearchBounds};
pub use transform::{apply_implementation_to_instance, restrict_domain_instance, Applied};
