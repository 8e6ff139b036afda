use maxcsp_core::CoreError;
use maxcsp_impls::ImplError;
use maxcsp_monge::MongeError;
use maxcsp_supermod::SupermodError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CasegenError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Supermod(#[from] SupermodError),
    #[error(transparent)]
    Impl(#[from] ImplError),
    #[error(transparent)]
    Monge(#[from] MongeError),
    #[error("case generation supports domains of size 2 to 4, got {0}")]
    DomainSize(usize),
    #[error("expected a binary predicate on the kernel domain, got arity {arity} on {domain_size} elements")]
    NotKernelPredicate { domain_size: usize, arity: usize },
    #[error("cannot start worker pool: {0}")]
    ThreadPool(String),
}
