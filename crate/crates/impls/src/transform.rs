use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use maxcsp_core::{standard, Constraint, Instance, Predicate};

use crate::{verify_strict_implementation, ImplError, StrictImplementation};

/// Result of replacing every `g`-constraint by an implementation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Applied {
    pub instance: Instance,
    /// Unit copies replaced; a weight-`w` constraint counts `w` times.
    pub replaced_copies: u64,
    pub alpha: u32,
}

impl Applied {
    /// `Opt(I') − Opt(I)`.
    pub fn opt_shift(&self) -> u64 {
        (self.alpha as u64 - 1) * self.replaced_copies
    }
}

/// Adds `p` under `name`, or a suffixed variant if `name` is taken by a different table.
fn intern(map: &mut BTreeMap<String, Predicate>, name: &str, p: Predicate) -> String {
    let mut candidate = name.to_string();
    let mut n = 1;
    loop {
        match map.get(&candidate) {
            None => {
                map.insert(candidate.clone(), p);
                return candidate;
            }
            Some(q) if *q == p => return candidate,
            _ => {
                n += 1;
                candidate = format!("{name}~{n}");
            }
        }
    }
}

fn fresh(taken: &mut BTreeSet<String>, base: &str) -> String {
    let mut n = 0;
    loop {
        let v = format!("{base}#{n}");
        if taken.insert(v.clone()) {
            return v;
        }
        n += 1;
    }
}

/// Replaces each unit copy of every `g`-constraint with the implementation's
/// constraints, using fresh auxiliary variables per copy.
///
/// `Opt(I') = Opt(I) + (α−1)·q_g` where `q_g` is the number of copies.
pub fn apply_implementation_to_instance(
    inst: &Instance,
    g: &str,
    si: &StrictImplementation,
) -> Result<Applied, ImplError> {
    let report = verify_strict_implementation(si)?;
    if let Some(f) = report.failure {
        return Err(ImplError::NotVerified(format!(
            "at {:?} the maximum is {} but g + alpha - 1 is {}",
            f.primary_values, f.achieved, f.expected
        )));
    }
    let target = inst.predicate(g).ok_or_else(|| ImplError::AbsentPredicate(g.to_string()))?;
    if *target != si.target {
        return Err(ImplError::NotVerified(format!("implemented predicate differs from {g}")));
    }
    let mut predicates: BTreeMap<String, Predicate> =
        inst.predicates().iter().filter(|(n, _)| n.as_str() != g).map(|(n, p)| (n.clone(), p.clone())).collect();
    let mut parts = Vec::with_capacity(si.constraints.len());
    for c in &si.constraints {
        let p = si.resolve(&c.pred)?;
        let label = match &c.pred {
            crate::PredRef::Named(n) => n.clone(),
            crate::PredRef::Inline(_) => format!("{g}.part"),
        };
        parts.push((intern(&mut predicates, &label, p), &c.scope));
    }
    let mut variables = inst.variables().to_vec();
    let mut taken: BTreeSet<String> = variables.iter().cloned().collect();
    let mut constraints = Vec::new();
    let mut replaced = 0u64;
    for c in inst.constraints() {
        if c.pred != g {
            constraints.push(c.clone());
            continue;
        }
        for _ in 0..c.weight {
            replaced += 1;
            let mut rename: BTreeMap<&str, String> =
                si.primary.iter().map(String::as_str).zip(c.scope.iter().cloned()).collect();
            for z in &si.auxiliary {
                let v = fresh(&mut taken, z);
                variables.push(v.clone());
                rename.insert(z, v);
            }
            for (name, scope) in &parts {
                constraints.push(Constraint {
                    pred: name.clone(),
                    scope: scope.iter().map(|v| rename[v.as_str()].clone()).collect(),
                    weight: 1,
                });
            }
        }
    }
    let instance = Instance::new(inst.domain_size(), predicates, variables, constraints)?;
    Ok(Applied { instance, replaced_copies: replaced, alpha: si.alpha })
}

/// Lifts an instance over `D'` (elements of `sub_domain` relabelled `0..|D'|`
/// in increasing order) to the full domain of size `d`, adding
/// `k·u_{D'}(x)` for each variable: `Opt(I') = Opt(I) + k·n`.
pub fn restrict_domain_instance(
    inst: &Instance,
    sub_domain: &[usize],
    d: usize,
    lifts: &BTreeMap<String, Predicate>,
    k: u64,
) -> Result<Instance, ImplError> {
    let occ = inst.occurrences();
    if let Some(i) = occ.iter().position(|&c| c == 0) {
        return Err(ImplError::UnusedVariable(inst.variables()[i].clone()));
    }
    let actual = occ.iter().copied().max().unwrap_or(0);
    if k < actual || k == 0 {
        return Err(ImplError::OccurrenceBound { k, actual });
    }
    let unary = standard::unary_subset(d, sub_domain)?;
    let mut predicates = BTreeMap::new();
    for name in inst.constraints().iter().map(|c| &c.pred).collect::<BTreeSet<_>>() {
        let lift = lifts.get(name).ok_or_else(|| ImplError::MissingLift(name.clone()))?;
        if lift.domain_size() != d || lift.restrict(sub_domain)?.predicate != inst.predicates()[name] {
            return Err(ImplError::LiftMismatch(name.clone()));
        }
        predicates.insert(name.clone(), lift.clone());
    }
    let mut sub = sub_domain.to_vec();
    sub.sort_unstable();
    sub.dedup();
    let u = intern(&mut predicates, &standard::unary_name(&sub), unary);
    let mut constraints = inst.constraints().to_vec();
    constraints.extend(inst.variables().iter().map(|v| Constraint { pred: u.clone(), scope: vec![v.clone()], weight: k }));
    Ok(Instance::new(d, predicates, inst.variables().to_vec(), constraints)?)
}
