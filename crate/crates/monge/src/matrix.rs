use serde::{Deserialize, Serialize};

use maxcsp_core::{Chain, Predicate};

use crate::MongeError;

/// An `n×n` integer matrix.
///
/// Entries are `i64`; Δ-sums are computed in `i128`, so they never overflow.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct SquareMatrix {
    n: usize,
    data: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    size: usize,
    rows: Vec<Vec<i64>>,
}

impl TryFrom<MatrixRepr> for SquareMatrix {
    type Error = MongeError;

    fn try_from(r: MatrixRepr) -> Result<Self, MongeError> {
        if r.rows.len() != r.size {
            return Err(MongeError::NotSquare { size: r.size, rows: r.rows.len() });
        }
        SquareMatrix::new(r.rows)
    }
}

impl From<SquareMatrix> for MatrixRepr {
    fn from(m: SquareMatrix) -> Self {
        MatrixRepr { size: m.n, rows: m.rows() }
    }
}

impl SquareMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, MongeError> {
        let n = rows.len();
        if n == 0 {
            return Err(MongeError::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(MongeError::NotSquare { size: n, rows: row.len() });
            }
            data.extend(row);
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        assert!(n > 0, "matrix size must be positive");
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        SquareMatrix { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        SquareMatrix::from_fn(n, |_, _| 0)
    }

    /// Matrix view `M(x, y) = f(x, y)` of a binary predicate.
    pub fn from_predicate(f: &Predicate) -> Result<Self, MongeError> {
        if f.arity() != 2 {
            return Err(MongeError::NotBinary(f.arity()));
        }
        Ok(SquareMatrix::from_fn(f.domain_size(), |i, j| f.at(i, j) as i64))
    }

    /// The binary predicate whose matrix this is; entries must be 0 or 1.
    pub fn to_predicate(&self) -> Result<Predicate, MongeError> {
        if !self.is_01() {
            return Err(MongeError::NotZeroOne);
        }
        Ok(Predicate::new(self.n, 2, self.data.iter().map(|&v| v == 1).collect()).expect("square table"))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn is_01(&self) -> bool {
        self.data.iter().all(|&v| v == 0 || v == 1)
    }

    pub fn transpose(&self) -> SquareMatrix {
        SquareMatrix::from_fn(self.n, |i, j| self.get(j, i))
    }

    /// Principal submatrix `M[B]` on the listed indices, in the given order.
    pub fn submatrix(&self, indices: &[usize]) -> SquareMatrix {
        SquareMatrix::from_fn(indices.len(), |i, j| self.get(indices[i], indices[j]))
    }

    /// `P(i, j) = M(c[i], c[j])`: rows and columns listed in chain order.
    pub fn permuted(&self, chain: &Chain) -> SquareMatrix {
        self.submatrix(chain.as_slice())
    }

    /// Entrywise sum with overflow checking.
    pub fn checked_add(&self, other: &SquareMatrix) -> Result<SquareMatrix, MongeError> {
        if self.n != other.n {
            return Err(MongeError::SizeMismatch { expected: self.n, got: other.n });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_add(*b).ok_or(MongeError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(SquareMatrix { n: self.n, data })
    }
}
