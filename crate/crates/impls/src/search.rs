use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use maxcsp_core::{decode_into, ConstraintLanguage, Predicate};

use crate::{ImplConstraint, PredRef, StrictImplementation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_aux: usize,
    pub max_constraints: usize,
    pub max_alpha: u32,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_aux: 2, max_constraints: 5, max_alpha: 8 }
    }
}

struct Atom {
    name: String,
    scope: Vec<usize>,
    values: Vec<u8>,
    aux_mask: u32,
}

struct Space<'a> {
    atoms: Vec<Atom>,
    target: &'a Predicate,
    m: usize,
    z_count: usize,
    all_aux: u32,
    max_slack: u8,
}

impl Space<'_> {
    /// Largest `max_Z sum(y, Z) − g(y)` and whether it is the same for every `y`.
    fn slack(&self, sum: &[u8]) -> Option<(u8, bool)> {
        let mut first = None;
        let mut constant = true;
        let mut worst = 0u8;
        let mut y = vec![0; self.m];
        for (yi, block) in sum.chunks(self.z_count).enumerate() {
            decode_into(yi, self.target.domain_size(), &mut y);
            let best = *block.iter().max().expect("non-empty block");
            let g = self.target.get(&y) as u8;
            let s = best.checked_sub(g)?;
            worst = worst.max(s);
            match first {
                None => first = Some(s),
                Some(f) if f != s => constant = false,
                _ => {}
            }
        }
        Some((worst, constant))
    }

    fn dfs(&self, start: usize, left: usize, sum: &mut Vec<u8>, used: u32, picked: &mut Vec<usize>) -> Option<u8> {
        if left == 0 {
            if used != self.all_aux {
                return None;
            }
            return match self.slack(sum) {
                Some((s, true)) if s <= self.max_slack => Some(s),
                _ => None,
            };
        }
        for i in start..self.atoms.len() {
            let a = &self.atoms[i];
            for (s, v) in sum.iter_mut().zip(&a.values) {
                *s += v;
            }
            // Adding constraints never lowers a maximum, so excess slack is final.
            let within = self.slack(sum).is_none_or(|(w, _)| w <= self.max_slack);
            picked.push(i);
            if within {
                if let Some(s) = self.dfs(i, left - 1, sum, used | a.aux_mask, picked) {
                    return Some(s);
                }
            }
            picked.pop();
            for (s, v) in sum.iter_mut().zip(&a.values) {
                *s -= v;
            }
        }
        None
    }
}

/// Finds the first strict implementation of `target` from the language
/// (with `u{c}` added when it includes fixed values) in a fixed order:
/// fewer auxiliaries first, then fewer constraints, then lexicographic
/// multisets of atoms ordered by predicate name and then scope.
///
/// Primary variables are `y1…ym`, auxiliaries `z1…zk`; every auxiliary
/// must occur in some constraint.
pub fn search_strict_implementation(
    base: &ConstraintLanguage,
    target: &Predicate,
    bounds: SearchBounds,
) -> Option<StrictImplementation> {
    let preds = base.with_fixed_values_expanded();
    let d = target.domain_size();
    if base.domain_size() != d || bounds.max_alpha == 0 || bounds.max_constraints > u8::MAX as usize {
        return None;
    }
    let m = target.arity();
    for k in 0..=bounds.max_aux.min(31) {
        let vars = m + k;
        let total = d.checked_pow(vars as u32)?;
        let z_count = d.pow(k as u32);
        let mut atoms = Vec::new();
        for (name, p) in &preds {
            let a = p.arity();
            let mut scope = vec![0; a];
            let mut tuple = vec![0; a];
            let mut assign = vec![0; vars];
            for s in 0..vars.pow(a as u32) {
                decode_into(s, vars, &mut scope);
                let values = (0..total)
                    .map(|x| {
                        decode_into(x, d, &mut assign);
                        for (t, &v) in tuple.iter_mut().zip(&scope) {
                            *t = assign[v];
                        }
                        p.get(&tuple) as u8
                    })
                    .collect();
                let aux_mask = scope.iter().filter(|&&v| v >= m).fold(0u32, |acc, &v| acc | 1 << (v - m));
                atoms.push(Atom { name: name.clone(), scope: scope.clone(), values, aux_mask });
            }
        }
        let space = Space {
            atoms,
            target,
            m,
            z_count,
            all_aux: ((1u64 << k) - 1) as u32,
            max_slack: (bounds.max_alpha - 1).min(u8::MAX as u32) as u8,
        };
        for size in 1..=bounds.max_constraints {
            let mut sum = vec![0u8; total];
            let mut picked = Vec::new();
            if let Some(slack) = space.dfs(0, size, &mut sum, 0, &mut picked) {
                return Some(build(&space, &preds, k, slack, &picked));
            }
        }
    }
    None
}

fn build(space: &Space, preds: &BTreeMap<String, Predicate>, k: usize, slack: u8, picked: &[usize]) -> StrictImplementation {
    let primary: Vec<String> = (1..=space.m).map(|i| format!("y{i}")).collect();
    let auxiliary: Vec<String> = (1..=k).map(|i| format!("z{i}")).collect();
    let name = |v: usize| if v < space.m { primary[v].clone() } else { auxiliary[v - space.m].clone() };
    let constraints: Vec<ImplConstraint> = picked
        .iter()
        .map(|&i| {
            let a = &space.atoms[i];
            ImplConstraint { pred: PredRef::Named(a.name.clone()), scope: a.scope.iter().map(|&v| name(v)).collect() }
        })
        .collect();
    let predicates = picked
        .iter()
        .map(|&i| {
            let n = &space.atoms[i].name;
            (n.clone(), preds[n].clone())
        })
        .collect();
    StrictImplementation {
        target: space.target.clone(),
        alpha: slack as u32 + 1,
        primary,
        auxiliary,
        predicates,
        constraints,
        source: None,
        formula: None,
        consequence: None,
    }
}
