use maxcsp_core::format::FormatError;
use maxcsp_core::CoreError;
use maxcsp_monge::MongeError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImplError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Monge(#[from] MongeError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("scope variable {0} is neither primary nor auxiliary")]
    UnboundVariable(String),
    #[error("variable {0} is declared twice")]
    DuplicateVariable(String),
    #[error("unknown predicate {0}")]
    UnknownPredicate(String),
    #[error("predicate {name} has arity {arity} but scope has {scope} variables")]
    ScopeLength { name: String, arity: usize, scope: usize },
    #[error("target has arity {arity} but {primary} primary variables are listed")]
    PrimaryArity { arity: usize, primary: usize },
    #[error("alpha must be positive")]
    ZeroAlpha,
    #[error("an implementation needs at least one constraint")]
    NoConstraints,
    #[error("{0} assignments are too many to verify exhaustively")]
    TooLarge(u128),
    #[error("implementation does not verify: {0}")]
    NotVerified(String),
    #[error("instance has no predicate named {0}")]
    AbsentPredicate(String),
    #[error("predicate is not of the form L(p,q)")]
    NotLForm,
    #[error("binarization needs arity at least 3, got {0}")]
    ArityTooSmall(usize),
    #[error("lift of {0} does not restrict to the instance predicate")]
    LiftMismatch(String),
    #[error("no lift given for predicate {0}")]
    MissingLift(String),
    #[error("occurrence bound {k} is below the actual maximum {actual}")]
    OccurrenceBound { k: u64, actual: u64 },
    #[error("variable {0} occurs in no constraint")]
    UnusedVariable(String),
    #[error("catalog has no entry {0}")]
    MissingEntry(String),
}
