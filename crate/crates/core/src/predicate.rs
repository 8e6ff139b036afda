use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Chain, CoreError};

/// An `m`-ary 0/1 predicate over `{0,…,d−1}` stored as a bit table.
///
/// The tuple `(a_1,…,a_m)` lives at index `Σ a_i·d^(m−i)`, so the first
/// argument is the most significant digit (and the row of the matrix view
/// when `m = 2`). The derived ordering compares tables lexicographically,
/// which is the order used for canonical representatives.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PredicateRepr", into = "PredicateRepr")]
pub struct Predicate {
    domain_size: usize,
    arity: usize,
    table: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct PredicateRepr {
    domain_size: usize,
    arity: usize,
    table: String,
}

impl TryFrom<PredicateRepr> for Predicate {
    type Error = CoreError;

    fn try_from(r: PredicateRepr) -> Result<Self, CoreError> {
        Predicate::from_bits(r.domain_size, r.arity, &r.table)
    }
}

impl From<Predicate> for PredicateRepr {
    fn from(p: Predicate) -> Self {
        PredicateRepr { domain_size: p.domain_size, arity: p.arity, table: p.to_bit_string() }
    }
}

/// Result of a restriction: the relabelled table and whether it is all-zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restricted {
    pub predicate: Predicate,
    pub trivial: bool,
}

/// A symmetry-calculus operation on predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transform {
    Permute(Chain),
    Transpose,
    Restrict(Vec<usize>),
    Fix { positions: Vec<usize>, constants: Vec<usize> },
}

pub fn transform_predicate(f: &Predicate, t: &Transform) -> Result<Restricted, CoreError> {
    let predicate = match t {
        Transform::Permute(pi) => f.permute(pi)?,
        Transform::Transpose => f.transpose()?,
        Transform::Restrict(sub) => return f.restrict(sub),
        Transform::Fix { positions, constants } => f.fix(positions, constants)?,
    };
    let trivial = predicate.is_trivial();
    Ok(Restricted { predicate, trivial })
}

impl Predicate {
    pub fn new(domain_size: usize, arity: usize, table: Vec<bool>) -> Result<Self, CoreError> {
        if domain_size == 0 {
            return Err(CoreError::EmptyDomain);
        }
        if arity == 0 {
            return Err(CoreError::ZeroArity);
        }
        let expected = table_len(domain_size, arity);
        if table.len() != expected {
            return Err(CoreError::TableLength { expected, got: table.len() });
        }
        Ok(Predicate { domain_size, arity, table })
    }

    /// Parses a `0`/`1` string in tuple-index order.
    pub fn from_bits(domain_size: usize, arity: usize, bits: &str) -> Result<Self, CoreError> {
        let table = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(CoreError::TableChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Predicate::new(domain_size, arity, table)
    }

    /// Parses a binary predicate written row by row, e.g. `"1000/0110/1000/0000"`.
    pub fn from_rows(rows: &str) -> Result<Self, CoreError> {
        let parts: Vec<&str> = rows.split('/').collect();
        let d = parts.len();
        Predicate::from_bits(d, 2, &parts.concat())
    }

    pub fn from_fn(
        domain_size: usize,
        arity: usize,
        f: impl Fn(&[usize]) -> bool,
    ) -> Result<Self, CoreError> {
        if domain_size == 0 {
            return Err(CoreError::EmptyDomain);
        }
        if arity == 0 {
            return Err(CoreError::ZeroArity);
        }
        let len = table_len(domain_size, arity);
        let mut tuple = vec![0; arity];
        let mut table = Vec::with_capacity(len);
        for idx in 0..len {
            decode_into(idx, domain_size, &mut tuple);
            table.push(f(&tuple));
        }
        Ok(Predicate { domain_size, arity, table })
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn bit(&self, index: usize) -> bool {
        self.table[index]
    }

    pub fn index_of(&self, tuple: &[usize]) -> Result<usize, CoreError> {
        if tuple.len() != self.arity {
            return Err(CoreError::ArityMismatch { expected: self.arity, got: tuple.len() });
        }
        let mut idx = 0;
        for &a in tuple {
            if a >= self.domain_size {
                return Err(CoreError::ValueOutOfRange { value: a, domain_size: self.domain_size });
            }
            idx = idx * self.domain_size + a;
        }
        Ok(idx)
    }

    pub fn eval(&self, tuple: &[usize]) -> Result<bool, CoreError> {
        Ok(self.table[self.index_of(tuple)?])
    }

    /// Unchecked lookup; panics on a malformed tuple.
    pub fn get(&self, tuple: &[usize]) -> bool {
        let idx = tuple.iter().fold(0, |acc, &a| acc * self.domain_size + a);
        self.table[idx]
    }

    /// Binary lookup `f(a, b)`.
    pub fn at(&self, a: usize, b: usize) -> bool {
        self.table[a * self.domain_size + b]
    }

    pub fn is_trivial(&self) -> bool {
        !self.table.iter().any(|&b| b)
    }

    pub fn count_ones(&self) -> usize {
        self.table.iter().filter(|&&b| b).count()
    }

    /// All tuples on which the predicate holds, in index order.
    pub fn satisfying_tuples(&self) -> Vec<Vec<usize>> {
        let mut tuple = vec![0; self.arity];
        let mut out = Vec::new();
        for (idx, &b) in self.table.iter().enumerate() {
            if b {
                decode_into(idx, self.domain_size, &mut tuple);
                out.push(tuple.clone());
            }
        }
        out
    }

    pub fn to_bit_string(&self) -> String {
        self.table.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// Row-by-row rendering of a binary predicate, e.g. `1000/0110/1000/0000`.
    pub fn to_rows_string(&self) -> String {
        if self.arity != 2 {
            return self.to_bit_string();
        }
        let bits = self.to_bit_string();
        bits.as_bytes()
            .chunks(self.domain_size)
            .map(|c| std::str::from_utf8(c).expect("ascii"))
            .collect::<Vec<_>>()
            .join("/")
    }

    /// `π(f)(a_1,…,a_m) = f(π(a_1),…,π(a_m))`.
    pub fn permute(&self, pi: &Chain) -> Result<Predicate, CoreError> {
        if pi.len() != self.domain_size {
            return Err(CoreError::PermutationSize { expected: self.domain_size, got: pi.len() });
        }
        let p = pi.as_slice();
        Predicate::from_fn(self.domain_size, self.arity, |t| {
            let mapped: Vec<usize> = t.iter().map(|&a| p[a]).collect();
            self.get(&mapped)
        })
    }

    /// `f^t(a, b) = f(b, a)`.
    pub fn transpose(&self) -> Result<Predicate, CoreError> {
        if self.arity != 2 {
            return Err(CoreError::NotBinary(self.arity));
        }
        Predicate::from_fn(self.domain_size, 2, |t| self.at(t[1], t[0]))
    }

    /// Restriction to `sub`, relabelled to `{0,…,|sub|−1}` in ascending order.
    pub fn restrict(&self, sub: &[usize]) -> Result<Restricted, CoreError> {
        let mut s = sub.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.is_empty() {
            return Err(CoreError::EmptySubset);
        }
        if let Some(&v) = s.iter().find(|&&v| v >= self.domain_size) {
            return Err(CoreError::ValueOutOfRange { value: v, domain_size: self.domain_size });
        }
        let predicate = Predicate::from_fn(s.len(), self.arity, |t| {
            let mapped: Vec<usize> = t.iter().map(|&a| s[a]).collect();
            self.get(&mapped)
        })?;
        let trivial = predicate.is_trivial();
        Ok(Restricted { predicate, trivial })
    }

    /// Slice obtained by substituting `constants[i]` at argument `positions[i]`.
    pub fn fix(&self, positions: &[usize], constants: &[usize]) -> Result<Predicate, CoreError> {
        if positions.len() != constants.len() {
            return Err(CoreError::FixLength { positions: positions.len(), constants: constants.len() });
        }
        let mut seen = vec![false; self.arity];
        for &p in positions {
            if p >= self.arity || seen[p] {
                return Err(CoreError::BadPositions(positions.to_vec()));
            }
            seen[p] = true;
        }
        if positions.len() == self.arity {
            return Err(CoreError::FixAll);
        }
        for &c in constants {
            if c >= self.domain_size {
                return Err(CoreError::ValueOutOfRange { value: c, domain_size: self.domain_size });
            }
        }
        let free: Vec<usize> = (0..self.arity).filter(|&i| !seen[i]).collect();
        let mut full = vec![0; self.arity];
        for (&p, &c) in positions.iter().zip(constants) {
            full[p] = c;
        }
        Predicate::from_fn(self.domain_size, free.len(), |t| {
            let mut tuple = full.clone();
            for (&p, &v) in free.iter().zip(t) {
                tuple[p] = v;
            }
            self.get(&tuple)
        })
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Predicate(d={}, m={}, {})", self.domain_size, self.arity, self.to_rows_string())
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_rows_string())
    }
}

pub(crate) fn table_len(domain_size: usize, arity: usize) -> usize {
    domain_size.pow(arity as u32)
}

/// Writes the tuple with index `idx` into `out` (first argument most significant).
pub fn decode_into(mut idx: usize, domain_size: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % domain_size;
        idx /= domain_size;
    }
}
