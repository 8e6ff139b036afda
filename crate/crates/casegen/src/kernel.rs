//! Bit-packed binary predicates on small domains.
//!
//! A table on `d` elements is a `u32` whose bit `d²−1−(a·d+b)` holds
//! `f(a, b)`, so numeric order is the lexicographic order of row-major tables.

use maxcsp_core::{Chain, Predicate};

use crate::CasegenError;

pub type Table = u32;

/// Per-domain precomputation: chains, sub-domains and restriction masks.
#[derive(Debug)]
pub struct Kernel {
    d: usize,
    chains: Vec<Vec<usize>>,
    /// Sub-domains of size `2..d` in lexicographic order.
    subdomains: Vec<Vec<usize>>,
    /// `small_masks[k][t]`: chain mask of table `t` on `k` elements.
    small_masks: Vec<Vec<u32>>,
}

pub const MAX_DOMAIN: usize = 4;

impl Kernel {
    pub fn new(d: usize) -> Result<Kernel, CasegenError> {
        if !(2..=MAX_DOMAIN).contains(&d) {
            return Err(CasegenError::DomainSize(d));
        }
        let chains = Chain::all(d).into_iter().map(|c| c.as_slice().to_vec()).collect();
        let mut subdomains = Vec::new();
        for mask in 0u32..1 << d {
            let s: Vec<usize> = (0..d).filter(|b| mask >> b & 1 == 1).collect();
            if (2..d).contains(&s.len()) {
                subdomains.push(s);
            }
        }
        subdomains.sort();
        let mut small_masks = vec![Vec::new(); d];
        for (k, slot) in small_masks.iter_mut().enumerate().skip(2) {
            let chains: Vec<Vec<usize>> = Chain::all(k).into_iter().map(|c| c.as_slice().to_vec()).collect();
            *slot = (0..1u32 << (k * k)).map(|t| mask_with(t, k, &chains)).collect();
        }
        Ok(Kernel { d, chains, subdomains, small_masks })
    }

    pub fn domain_size(&self) -> usize {
        self.d
    }

    pub fn table_count(&self) -> u64 {
        1 << (self.d * self.d)
    }

    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    pub fn subdomains(&self) -> &[Vec<usize>] {
        &self.subdomains
    }

    pub fn full_chain_mask(&self) -> u32 {
        ((1u64 << self.chains.len()) - 1) as u32
    }

    pub fn get(&self, t: Table, a: usize, b: usize) -> bool {
        get(t, self.d, a, b)
    }

    /// Bit `c` set iff `t` is supermodular on chain `c` (lexicographic chain order).
    pub fn chain_mask(&self, t: Table) -> u32 {
        mask_with(t, self.d, &self.chains)
    }

    pub fn has_all_ones_line(&self, t: Table) -> bool {
        let d = self.d;
        (0..d).any(|i| (0..d).all(|j| self.get(t, i, j)) || (0..d).all(|j| self.get(t, j, i)))
    }

    pub fn restrict(&self, t: Table, sub: &[usize]) -> Table {
        let k = sub.len();
        let mut out = 0;
        for (i, &a) in sub.iter().enumerate() {
            for (j, &b) in sub.iter().enumerate() {
                if self.get(t, a, b) {
                    out |= 1 << (k * k - 1 - (i * k + j));
                }
            }
        }
        out
    }

    /// Chain masks of the restriction to each sub-domain; an all-zero
    /// restriction is dropped, which counts as the full mask.
    pub fn restriction_masks(&self, t: Table) -> Vec<u32> {
        self.subdomains
            .iter()
            .map(|s| {
                let r = self.restrict(t, s);
                let k = s.len();
                if r == 0 {
                    ((1u64 << factorial(k)) - 1) as u32
                } else {
                    self.small_masks[k][r as usize]
                }
            })
            .collect()
    }

    /// Every proper restriction of the set has a common chain.
    pub fn condition_star(&self, ts: &[Table]) -> bool {
        let masks: Vec<Vec<u32>> = ts.iter().map(|&t| self.restriction_masks(t)).collect();
        (0..self.subdomains.len()).all(|i| masks.iter().fold(u32::MAX, |acc, m| acc & m[i]) != 0)
    }

    /// `π(f)(a, b) = f(π(a), π(b))`.
    pub fn permute(&self, t: Table, pi: &[usize]) -> Table {
        let d = self.d;
        let mut out = 0;
        for a in 0..d {
            for b in 0..d {
                if self.get(t, pi[a], pi[b]) {
                    out |= 1 << (d * d - 1 - (a * d + b));
                }
            }
        }
        out
    }

    pub fn transpose(&self, t: Table) -> Table {
        let d = self.d;
        let mut out = 0;
        for a in 0..d {
            for b in 0..d {
                if self.get(t, b, a) {
                    out |= 1 << (d * d - 1 - (a * d + b));
                }
            }
        }
        out
    }

    /// Least table among `π(t)` and `π(t^t)`.
    pub fn canonical(&self, t: Table) -> Table {
        let tt = self.transpose(t);
        self.chains.iter().map(|p| self.permute(t, p).min(self.permute(tt, p))).min().expect("non-empty")
    }

    pub fn from_predicate(&self, f: &Predicate) -> Result<Table, CasegenError> {
        if f.arity() != 2 || f.domain_size() != self.d {
            return Err(CasegenError::NotKernelPredicate { domain_size: f.domain_size(), arity: f.arity() });
        }
        let n = self.d * self.d;
        Ok(f.table().iter().enumerate().filter(|(_, &b)| b).fold(0, |acc, (i, _)| acc | 1 << (n - 1 - i)))
    }

    pub fn to_predicate(&self, t: Table) -> Predicate {
        Predicate::from_fn(self.d, 2, |v| self.get(t, v[0], v[1])).expect("in-range table")
    }
}

fn get(t: Table, d: usize, a: usize, b: usize) -> bool {
    t >> (d * d - 1 - (a * d + b)) & 1 == 1
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

fn mask_with(t: Table, d: usize, chains: &[Vec<usize>]) -> u32 {
    let mut mask = 0;
    'chain: for (c, order) in chains.iter().enumerate() {
        for s in 0..d - 1 {
            for u in 0..d - 1 {
                let (i, r, j, w) = (order[s], order[s + 1], order[u], order[u + 1]);
                let lhs = get(t, d, i, w) as u8 + get(t, d, r, j) as u8;
                if lhs > get(t, d, i, j) as u8 + get(t, d, r, w) as u8 {
                    continue 'chain;
                }
            }
        }
        mask |= 1 << c;
    }
    mask
}
