use serde::{Deserialize, Serialize};

use crate::check::{anti_monge_violation, CheckMethod};
use crate::{Axis, MongeError, Quadruple, SquareMatrix};

/// Structure of a 0-1 a-Monge matrix.
///
/// `L(p, q)` has ones exactly at `i ≤ p, j ≤ q`; `R(s, t)` has ones exactly
/// at `i ≥ s, j ≥ t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MongeDecomposition {
    L { p: usize, q: usize },
    R { s: usize, t: usize },
    LplusR { p: usize, q: usize, s: usize, t: usize },
    AllZero,
    HasAllOnesLine { axis: Axis, index: usize },
    NotAMonge { counterexample: Quadruple },
}

pub fn l_matrix(n: usize, p: usize, q: usize) -> SquareMatrix {
    SquareMatrix::from_fn(n, |i, j| (i <= p && j <= q) as i64)
}

pub fn r_matrix(n: usize, s: usize, t: usize) -> SquareMatrix {
    SquareMatrix::from_fn(n, |i, j| (i >= s && j >= t) as i64)
}

impl MongeDecomposition {
    /// Rebuilds the matrix for the three structural variants.
    pub fn reconstruct(&self, n: usize) -> Option<SquareMatrix> {
        match *self {
            MongeDecomposition::L { p, q } => Some(l_matrix(n, p, q)),
            MongeDecomposition::R { s, t } => Some(r_matrix(n, s, t)),
            MongeDecomposition::LplusR { p, q, s, t } => l_matrix(n, p, q).checked_add(&r_matrix(n, s, t)).ok(),
            MongeDecomposition::AllZero => Some(SquareMatrix::zeros(n)),
            _ => None,
        }
    }
}

fn all_ones_line(m: &SquareMatrix) -> Option<(Axis, usize)> {
    let n = m.size();
    if let Some(r) = (0..n).find(|&r| (0..n).all(|c| m.get(r, c) == 1)) {
        return Some((Axis::Row, r));
    }
    (0..n).find(|&c| (0..n).all(|r| m.get(r, c) == 1)).map(|c| (Axis::Column, c))
}

/// Splits a 0-1 a-Monge matrix without all-ones lines into its `L`/`R` parts.
///
/// Checks run in order: all-ones line (rows first), all-zero, a-Monge.
pub fn decompose_01_amonge(m: &SquareMatrix) -> Result<MongeDecomposition, MongeError> {
    if !m.is_01() {
        return Err(MongeError::NotZeroOne);
    }
    let n = m.size();
    if let Some((axis, index)) = all_ones_line(m) {
        return Ok(MongeDecomposition::HasAllOnesLine { axis, index });
    }
    if (0..n).all(|i| (0..n).all(|j| m.get(i, j) == 0)) {
        return Ok(MongeDecomposition::AllZero);
    }
    if let Some(counterexample) = anti_monge_violation(m, CheckMethod::Adjacent) {
        return Ok(MongeDecomposition::NotAMonge { counterexample });
    }
    // R never reaches row 0 or column 0, and L never reaches row or column n−1,
    // so the first column/row of ones pins down p, q and the last pins s, t.
    let run = |f: &dyn Fn(usize) -> i64| (0..n).take_while(|&x| f(x) == 1).count();
    let l = (m.get(0, 0) == 1).then(|| (run(&|i| m.get(i, 0)) - 1, run(&|j| m.get(0, j)) - 1));
    let r = (m.get(n - 1, n - 1) == 1)
        .then(|| (n - run(&|i| m.get(n - 1 - i, n - 1)), n - run(&|j| m.get(n - 1, n - 1 - j))));
    let d = match (l, r) {
        (Some((p, q)), Some((s, t))) => MongeDecomposition::LplusR { p, q, s, t },
        (Some((p, q)), None) => MongeDecomposition::L { p, q },
        (None, Some((s, t))) => MongeDecomposition::R { s, t },
        (None, None) => unreachable!("a non-zero a-Monge 0-1 matrix has a corner one"),
    };
    debug_assert_eq!(d.reconstruct(n).as_ref(), Some(m));
    Ok(d)
}
