use serde::{Deserialize, Serialize};

use maxcsp_core::Chain;

use crate::{MongeError, SquareMatrix};

/// Index quadruple `(i, j, k, l)` naming rows `i, j` and columns `k, l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quadruple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMethod {
    Full,
    Adjacent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Row,
    Column,
}

/// `M(i,k) + M(j,l) − M(i,l) − M(j,k)` without bounds checks.
#[inline]
pub(crate) fn delta_raw(m: &SquareMatrix, i: usize, j: usize, k: usize, l: usize) -> i128 {
    m.get(i, k) as i128 + m.get(j, l) as i128 - m.get(i, l) as i128 - m.get(j, k) as i128
}

/// The Δ-sum `M(i,k) + M(j,l) − M(i,l) − M(j,k)`.
pub fn delta(m: &SquareMatrix, i: usize, j: usize, k: usize, l: usize) -> Result<i128, MongeError> {
    let n = m.size();
    if let Some(&index) = [i, j, k, l].iter().find(|&&x| x >= n) {
        return Err(MongeError::IndexOutOfRange { index, size: n });
    }
    Ok(delta_raw(m, i, j, k, l))
}

/// Shorthand `Δ(i, j) = Δ(i, j, i, j)`.
pub fn delta2(m: &SquareMatrix, i: usize, j: usize) -> Result<i128, MongeError> {
    delta(m, i, j, i, j)
}

/// First quadruple with `i<j`, `k<l` and a negative Δ, in lexicographic order.
///
/// The adjacent method inspects only `(s, s+1, t, t+1)`; every Δ is a sum of
/// adjacent ones, so both methods accept the same matrices.
pub fn anti_monge_violation(m: &SquareMatrix, method: CheckMethod) -> Option<Quadruple> {
    let n = m.size();
    match method {
        CheckMethod::Adjacent => {
            for s in 0..n.saturating_sub(1) {
                for t in 0..n - 1 {
                    if delta_raw(m, s, s + 1, t, t + 1) < 0 {
                        return Some(Quadruple { i: s, j: s + 1, k: t, l: t + 1 });
                    }
                }
            }
            None
        }
        CheckMethod::Full => {
            for i in 0..n {
                for j in i + 1..n {
                    for k in 0..n {
                        for l in k + 1..n {
                            if delta_raw(m, i, j, k, l) < 0 {
                                return Some(Quadruple { i, j, k, l });
                            }
                        }
                    }
                }
            }
            None
        }
    }
}

pub fn is_anti_monge(m: &SquareMatrix, method: CheckMethod) -> bool {
    anti_monge_violation(m, method).is_none()
}

/// Adjacent check of `M` with rows and columns listed in `order`, without
/// building the permuted matrix.
pub fn is_anti_monge_under(m: &SquareMatrix, order: &[usize]) -> bool {
    order.windows(2).all(|r| order.windows(2).all(|c| delta_raw(m, r[0], r[1], c[0], c[1]) >= 0))
}

/// Whether `chain` is an a-Monge permutation of `m`.
pub fn verifies(m: &SquareMatrix, chain: &Chain) -> Result<bool, MongeError> {
    if chain.len() != m.size() {
        return Err(MongeError::SizeMismatch { expected: m.size(), got: chain.len() });
    }
    Ok(is_anti_monge_under(m, chain.as_slice()))
}

/// If line `s` equals line `t` plus a constant `α` along `axis`, returns `α`.
pub fn line_equivalent(m: &SquareMatrix, axis: Axis, s: usize, t: usize) -> Result<Option<i128>, MongeError> {
    let n = m.size();
    if let Some(&index) = [s, t].iter().find(|&&x| x >= n) {
        return Err(MongeError::IndexOutOfRange { index, size: n });
    }
    if s == t {
        return Err(MongeError::SameLine);
    }
    let at = |line: usize, x: usize| -> i128 {
        match axis {
            Axis::Row => m.get(line, x) as i128,
            Axis::Column => m.get(x, line) as i128,
        }
    };
    let alpha = at(s, 0) - at(t, 0);
    Ok((1..n).all(|x| at(s, x) - at(t, x) == alpha).then_some(alpha))
}

pub(crate) fn both_equivalent(m: &SquareMatrix, s: usize, t: usize) -> bool {
    let n = m.size();
    let rows = (1..n).all(|x| m.get(s, x) as i128 - m.get(t, x) as i128 == m.get(s, 0) as i128 - m.get(t, 0) as i128);
    rows && (1..n).all(|x| m.get(x, s) as i128 - m.get(x, t) as i128 == m.get(0, s) as i128 - m.get(0, t) as i128)
}

/// `M(s, t) = u_s + v_t`.
pub fn sum_matrix(u: &[i64], v: &[i64]) -> Result<SquareMatrix, MongeError> {
    if u.len() != v.len() {
        return Err(MongeError::SizeMismatch { expected: u.len(), got: v.len() });
    }
    if u.is_empty() {
        return Err(MongeError::Empty);
    }
    for &a in u {
        for &b in v {
            a.checked_add(b).ok_or(MongeError::Overflow)?;
        }
    }
    Ok(SquareMatrix::from_fn(u.len(), |s, t| u[s] + v[t]))
}
