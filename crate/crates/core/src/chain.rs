use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::CoreError;

/// A permutation of `{0,…,n−1}`.
///
/// Read as a chain, position 0 holds the least element, so `[2,0,1]` is the
/// order `2<0<1`. Read as a relabelling `π`, it maps `a` to `self[a]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Chain(Vec<usize>);

impl Chain {
    pub fn new(order: Vec<usize>) -> Result<Self, CoreError> {
        let n = order.len();
        if n == 0 {
            return Err(CoreError::InvalidPermutation(order));
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || seen[v] {
                return Err(CoreError::InvalidPermutation(order));
            }
            seen[v] = true;
        }
        Ok(Chain(order))
    }

    pub fn identity(n: usize) -> Self {
        Chain((0..n).collect())
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> Vec<Chain> {
        (0..n).permutations(n).map(Chain).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Image of `a` under the relabelling reading.
    pub fn apply(&self, a: usize) -> usize {
        self.0[a]
    }

    /// Dual chain: the same elements in the opposite order.
    pub fn reverse(&self) -> Chain {
        Chain(self.0.iter().rev().copied().collect())
    }

    pub fn inverse(&self) -> Chain {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Chain(inv)
    }

    /// Position of each element in the chain (`rank[a] < rank[b]` iff `a` precedes `b`).
    pub fn ranks(&self) -> Vec<usize> {
        self.inverse().0
    }

    /// `(self ∘ other)(a) = self(other(a))`.
    pub fn compose(&self, other: &Chain) -> Chain {
        Chain(other.0.iter().map(|&a| self.0[a]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }
}

impl TryFrom<Vec<usize>> for Chain {
    type Error = CoreError;

    fn try_from(order: Vec<usize>) -> Result<Self, Self::Error> {
        Chain::new(order)
    }
}

impl From<Chain> for Vec<usize> {
    fn from(c: Chain) -> Self {
        c.0
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().map(|v| v.to_string()).join("<"))
    }
}
