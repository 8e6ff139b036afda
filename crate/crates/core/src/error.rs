use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("domain size must be positive")]
    EmptyDomain,
    #[error("arity must be positive")]
    ZeroArity,
    #[error("table has length {got}, expected {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("table may only contain '0' and '1', found {0:?}")]
    TableChar(char),
    #[error("tuple has length {got}, predicate arity is {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("value {value} is outside the domain of size {domain_size}")]
    ValueOutOfRange { value: usize, domain_size: usize },
    #[error("{0:?} is not a permutation")]
    InvalidPermutation(Vec<usize>),
    #[error("permutation of size {got} applied to domain of size {expected}")]
    PermutationSize { expected: usize, got: usize },
    #[error("operation requires a binary predicate, got arity {0}")]
    NotBinary(usize),
    #[error("subset must be non-empty")]
    EmptySubset,
    #[error("positions {0:?} are repeated or out of range")]
    BadPositions(Vec<usize>),
    #[error("cannot fix every argument of a predicate")]
    FixAll,
    #[error("{positions} positions but {constants} constants")]
    FixLength { positions: usize, constants: usize },
    #[error("predicate {name:?} has domain size {got}, expected {expected}")]
    DomainMismatch { name: String, expected: usize, got: usize },
    #[error("predicate {0:?} is trivial (all-zero table)")]
    TrivialPredicate(String),
    #[error("unknown predicate {0:?}")]
    UnknownPredicate(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("duplicate variable {0:?}")]
    DuplicateVariable(String),
    #[error("constraint {index} has weight zero")]
    ZeroWeight { index: usize },
    #[error("constraint {index} uses {pred:?} of arity {arity} with a scope of length {scope}")]
    ScopeLength { index: usize, pred: String, arity: usize, scope: usize },
    #[error("assignment has {got} values for {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("search over {domain_size}^{domain_size} maps exceeds the bound {bound}")]
    SizeBound { domain_size: usize, bound: usize },
    #[error("two-monotone bound {0:?} is outside the domain")]
    BadCorner((usize, usize)),
    #[error("two-monotone predicate needs at least one corner")]
    NoCorner,
}
