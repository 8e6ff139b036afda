use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MongeError {
    #[error("matrix must have at least one row")]
    Empty,
    #[error("matrix of size {size} has a line of length {rows}")]
    NotSquare { size: usize, rows: usize },
    #[error("expected a matrix of size {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("entry overflow")]
    Overflow,
    #[error("matrix entries must be 0 or 1")]
    NotZeroOne,
    #[error("predicate has arity {0}, expected 2")]
    NotBinary(usize),
    #[error("size {size} exceeds the brute-force bound {bound}")]
    SizeBound { size: usize, bound: usize },
    #[error("empty matrix family")]
    EmptyFamily,
    #[error("matrix is not anti-Monge: delta({i},{j},{k},{l}) < 0", i = .0.i, j = .0.j, k = .0.k, l = .0.l)]
    NotAntiMonge(crate::Quadruple),
    #[error("invalid multipartite order: {0}")]
    InvalidOrder(String),
    #[error("line indices must differ")]
    SameLine,
    #[error("no bounded witness found; the input violates the four-index theorem")]
    WitnessNotFound,
    #[error("union digraph has a cycle {0:?} but no two-cycle")]
    CycleWithoutTwoCycle(Vec<usize>),
}
