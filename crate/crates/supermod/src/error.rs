use maxcsp_core::CoreError;
use maxcsp_monge::MongeError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SupermodError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Monge(#[from] MongeError),
    #[error("chain has {got} elements, predicate domain has {expected}")]
    ChainSize { expected: usize, got: usize },
    #[error("binary slices need arity at least 2, got {0}")]
    ArityTooSmall(usize),
    #[error("language is empty")]
    EmptyLanguage,
    #[error("witness {0} failed its own verification")]
    WitnessUnverified(String),
}
