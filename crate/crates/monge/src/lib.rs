//! Anti-Monge matrices: Δ-sums, recognition under simultaneous row and
//! column permutation, the L/R structure of 0-1 a-Monge matrices, and
//! multipartite orders with their precedence-graph merging.

mod check;
mod decompose;
mod error;
mod matrix;
mod order;
mod recognize;

pub use check::{
    anti_monge_violation, delta, delta2, is_anti_monge, is_anti_monge_under, line_equivalent, sum_matrix, verifies,
    Axis, CheckMethod, Quadruple,
};
pub use decompose::{decompose_01_amonge, l_matrix, r_matrix, MongeDecomposition};
pub use error::MongeError;
pub use matrix::SquareMatrix;
pub use order::{
    amonge_permutation_family, com_propagate, merge_orders, ArcOrigin, ComResult, MergeResult, MultipartiteOrder,
    PrecedenceGraph,
};
pub use recognize::{
    find_amonge_permutation, find_amonge_permutation_bounded, find_common_amonge_permutation,
    find_common_amonge_permutation_bounded, has_common_permutation_on, AmongeResult, CommonResult,
    DEFAULT_BRUTE_FORCE_BOUND,
};
