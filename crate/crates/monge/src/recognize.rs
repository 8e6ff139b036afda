use serde::{Deserialize, Serialize};

use maxcsp_core::Chain;

use crate::check::{both_equivalent, is_anti_monge_under};
use crate::{MongeError, SquareMatrix};

/// Largest size for which recognition enumerates all `n!` permutations.
pub const DEFAULT_BRUTE_FORCE_BOUND: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum AmongeResult {
    Permutation { permutation: Chain },
    /// `M[B]` has no a-Monge permutation.
    BadWitness { indices: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CommonResult {
    Permutation { permutation: Chain },
    /// The listed matrices, restricted to `indices`, share no a-Monge permutation.
    Witness { matrices: Vec<usize>, indices: Vec<usize> },
}

impl AmongeResult {
    pub fn permutation(&self) -> Option<&Chain> {
        match self {
            AmongeResult::Permutation { permutation } => Some(permutation),
            AmongeResult::BadWitness { .. } => None,
        }
    }
}

impl CommonResult {
    pub fn permutation(&self) -> Option<&Chain> {
        match self {
            CommonResult::Permutation { permutation } => Some(permutation),
            CommonResult::Witness { .. } => None,
        }
    }
}

/// Lexicographically first a-Monge permutation of `m`, or a bad index set of size ≤ 4.
pub fn find_amonge_permutation(m: &SquareMatrix) -> Result<AmongeResult, MongeError> {
    find_amonge_permutation_bounded(m, DEFAULT_BRUTE_FORCE_BOUND)
}

pub fn find_amonge_permutation_bounded(m: &SquareMatrix, bound: usize) -> Result<AmongeResult, MongeError> {
    Ok(match find_common_amonge_permutation_bounded(std::slice::from_ref(m), bound)? {
        CommonResult::Permutation { permutation } => AmongeResult::Permutation { permutation },
        CommonResult::Witness { indices, .. } => AmongeResult::BadWitness { indices },
    })
}

/// One permutation making every matrix a-Monge, or a subfamily of at most
/// three matrices and at most four indices with no common a-Monge permutation.
pub fn find_common_amonge_permutation(ms: &[SquareMatrix]) -> Result<CommonResult, MongeError> {
    find_common_amonge_permutation_bounded(ms, DEFAULT_BRUTE_FORCE_BOUND)
}

pub fn find_common_amonge_permutation_bounded(ms: &[SquareMatrix], bound: usize) -> Result<CommonResult, MongeError> {
    let n = check_family(ms)?;
    if n > bound {
        return Err(MongeError::SizeBound { size: n, bound });
    }
    if let Some(permutation) = exhaustive_common(ms, n) {
        return Ok(CommonResult::Permutation { permutation });
    }
    common_witness(ms).ok_or(MongeError::WitnessNotFound)
}

pub(crate) fn check_family(ms: &[SquareMatrix]) -> Result<usize, MongeError> {
    let n = ms.first().ok_or(MongeError::EmptyFamily)?.size();
    if let Some(m) = ms.iter().find(|m| m.size() != n) {
        return Err(MongeError::SizeMismatch { expected: n, got: m.size() });
    }
    Ok(n)
}

fn exhaustive_common(ms: &[SquareMatrix], n: usize) -> Option<Chain> {
    Chain::all(n).into_iter().find(|c| ms.iter().all(|m| is_anti_monge_under(m, c.as_slice())))
}

/// All permutations of `m[indices]` in lexicographic order that are a-Monge, as a bitmask.
fn valid_mask(m: &SquareMatrix, indices: &[usize], perms: &[Chain]) -> u32 {
    let mut order = vec![0; indices.len()];
    let mut mask = 0;
    for (bit, p) in perms.iter().enumerate() {
        for (slot, &x) in order.iter_mut().zip(p.as_slice()) {
            *slot = indices[x];
        }
        if is_anti_monge_under(m, &order) {
            mask |= 1 << bit;
        }
    }
    mask
}

/// Smallest index of each class of indices that are row- and
/// column-equivalent in every matrix.
pub(crate) fn representatives(ms: &[SquareMatrix], n: usize) -> Vec<usize> {
    (0..n).filter(|&t| !(0..t).any(|s| ms.iter().all(|m| both_equivalent(m, s, t)))).collect()
}

/// Search order: index sets by size then lexicographically, and for each set
/// subfamilies by size then lexicographically.
fn common_witness(ms: &[SquareMatrix]) -> Option<CommonResult> {
    let reps = representatives(ms, ms[0].size());
    for k in 2..=4usize.min(reps.len()) {
        let perms = Chain::all(k);
        for b in combinations(reps.len(), k) {
            let indices: Vec<usize> = b.iter().map(|&x| reps[x]).collect();
            let masks: Vec<u32> = ms.iter().map(|m| valid_mask(m, &indices, &perms)).collect();
            if masks.iter().fold(u32::MAX, |a, &x| a & x) != 0 {
                continue;
            }
            for size in 1..=3usize.min(ms.len()) {
                for sub in combinations(ms.len(), size) {
                    if sub.iter().fold(u32::MAX, |a, &x| a & masks[x]) == 0 {
                        return Some(CommonResult::Witness { matrices: sub, indices });
                    }
                }
            }
        }
    }
    None
}

/// `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = (k <= n).then(|| (0..k).collect::<Vec<_>>());
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut c = cur.clone();
        if let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            next = Some(c);
        }
        Some(cur)
    })
}

/// Whether some permutation of `indices` makes every listed matrix a-Monge.
pub fn has_common_permutation_on(ms: &[&SquareMatrix], indices: &[usize]) -> bool {
    let perms = Chain::all(indices.len());
    let mut order = vec![0; indices.len()];
    perms.iter().any(|p| {
        for (slot, &x) in order.iter_mut().zip(p.as_slice()) {
            *slot = indices[x];
        }
        ms.iter().all(|m| is_anti_monge_under(m, &order))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight4() -> SquareMatrix {
        SquareMatrix::new(vec![vec![1, 1, 0, 1], vec![1, 1, 0, 0], vec![0, 0, 0, 0], vec![1, 0, 0, 1]]).unwrap()
    }

    fn diag3(i: usize) -> SquareMatrix {
        SquareMatrix::from_fn(3, |r, c| (r == i && c == i) as i64)
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<_> = combinations(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(2, 3).count(), 0);
        assert_eq!(combinations(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn tight_four_by_four() {
        let m = tight4();
        assert_eq!(find_amonge_permutation(&m).unwrap(), AmongeResult::BadWitness { indices: vec![0, 1, 2, 3] });
        for drop in 0..4 {
            let keep: Vec<usize> = (0..4).filter(|&x| x != drop).collect();
            assert!(find_amonge_permutation(&m.submatrix(&keep)).unwrap().permutation().is_some());
        }
    }

    #[test]
    fn three_diagonal_units_are_tight() {
        let ms: Vec<_> = (0..3).map(diag3).collect();
        assert_eq!(
            find_common_amonge_permutation(&ms).unwrap(),
            CommonResult::Witness { matrices: vec![0, 1, 2], indices: vec![0, 1, 2] }
        );
        for skip in 0..3 {
            let two: Vec<_> = (0..3).filter(|&i| i != skip).map(diag3).collect();
            assert!(find_common_amonge_permutation(&two).unwrap().permutation().is_some());
        }
    }

    #[test]
    fn identical_amonge_family_gets_identity() {
        let m = SquareMatrix::from_fn(4, |i, j| (i * j) as i64);
        let r = find_common_amonge_permutation(&[m.clone(), m]).unwrap();
        assert!(r.permutation().unwrap().is_identity());
    }

    #[test]
    fn errors() {
        assert_eq!(find_common_amonge_permutation(&[]), Err(MongeError::EmptyFamily));
        let r = find_common_amonge_permutation(&[SquareMatrix::zeros(2), SquareMatrix::zeros(3)]);
        assert!(matches!(r, Err(MongeError::SizeMismatch { .. })));
        assert!(matches!(find_amonge_permutation(&SquareMatrix::zeros(9)), Err(MongeError::SizeBound { .. })));
    }
}
