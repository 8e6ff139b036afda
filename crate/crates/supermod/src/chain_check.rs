use serde::{Deserialize, Serialize};

use maxcsp_core::{decode_into, Chain, Predicate};
use maxcsp_monge::{is_anti_monge_under, SquareMatrix};

use crate::SupermodError;

/// A binary slice of an `m`-ary predicate: arguments `free.0 < free.1` stay
/// free, the others are fixed to constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slice {
    pub predicate: Predicate,
    pub free: (usize, usize),
    pub fixed_positions: Vec<usize>,
    pub fixed_constants: Vec<usize>,
}

/// All `C(m,2)·d^(m−2)` binary slices: free pairs in lexicographic order,
/// then constant tuples in lexicographic order.
pub fn binary_slices(f: &Predicate) -> Result<Vec<Slice>, SupermodError> {
    let (d, m) = (f.domain_size(), f.arity());
    if m < 2 {
        return Err(SupermodError::ArityTooSmall(m));
    }
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let positions: Vec<usize> = (0..m).filter(|&p| p != i && p != j).collect();
            let mut constants = vec![0; m - 2];
            for code in 0..d.pow((m - 2) as u32) {
                decode_into(code, d, &mut constants);
                let predicate = if m == 2 { f.clone() } else { f.fix(&positions, &constants)? };
                out.push(Slice {
                    predicate,
                    free: (i, j),
                    fixed_positions: positions.clone(),
                    fixed_constants: constants.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// A pair of tuples breaking `f(a)+f(b) ≤ f(a⊓b)+f(a⊔b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

fn check_chain(f: &Predicate, chain: &Chain) -> Result<Vec<usize>, SupermodError> {
    if chain.len() != f.domain_size() {
        return Err(SupermodError::ChainSize { expected: f.domain_size(), got: chain.len() });
    }
    Ok(chain.ranks())
}

/// First violating pair by tuple index, from the definition over all of `D^m × D^m`.
pub fn supermodular_violation(f: &Predicate, chain: &Chain) -> Result<Option<Violation>, SupermodError> {
    let rank = check_chain(f, chain)?;
    let (d, m) = (f.domain_size(), f.arity());
    let size = f.table().len();
    let (mut a, mut b, mut meet, mut join) = (vec![0; m], vec![0; m], vec![0; m], vec![0; m]);
    for ia in 0..size {
        decode_into(ia, d, &mut a);
        for ib in 0..size {
            let lhs = f.bit(ia) as u8 + f.bit(ib) as u8;
            if lhs == 0 {
                continue;
            }
            decode_into(ib, d, &mut b);
            for t in 0..m {
                let (lo, hi) = if rank[a[t]] <= rank[b[t]] { (a[t], b[t]) } else { (b[t], a[t]) };
                meet[t] = lo;
                join[t] = hi;
            }
            if lhs > f.get(&meet) as u8 + f.get(&join) as u8 {
                return Ok(Some(Violation { a: a.clone(), b: b.clone() }));
            }
        }
    }
    Ok(None)
}

/// The slice route: every binary slice must be a-Monge with rows and columns in chain order.
pub fn is_supermodular_via_slices(f: &Predicate, chain: &Chain) -> Result<bool, SupermodError> {
    check_chain(f, chain)?;
    if f.arity() < 2 {
        return Ok(true);
    }
    for s in binary_slices(f)? {
        let m = SquareMatrix::from_predicate(&s.predicate)?;
        if !is_anti_monge_under(&m, chain.as_slice()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupermodCheck {
    pub holds: bool,
    pub violation: Option<Violation>,
}

/// Decides supermodularity on `chain` by the definition and by slices; the two must agree.
pub fn is_supermodular_on_chain(f: &Predicate, chain: &Chain) -> Result<SupermodCheck, SupermodError> {
    let violation = supermodular_violation(f, chain)?;
    let by_slices = is_supermodular_via_slices(f, chain)?;
    assert_eq!(violation.is_none(), by_slices, "definition and slice checks disagree on {f:?} over {chain}");
    Ok(SupermodCheck { holds: violation.is_none(), violation })
}

/// Every chain on which `f` is supermodular, in lexicographic order.
pub fn supermodular_chains(f: &Predicate) -> Result<Vec<Chain>, SupermodError> {
    let mut out = Vec::new();
    for c in Chain::all(f.domain_size()) {
        if is_supermodular_via_slices(f, &c)? {
            out.push(c);
        }
    }
    Ok(out)
}
