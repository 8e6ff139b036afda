use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use maxcsp_core::{decode_into, reference, standard, Chain, Predicate};

use crate::ImplError;

/// A constraint's predicate: a name or an inline table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PredRef {
    Named(String),
    Inline(Predicate),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplConstraint {
    pub pred: PredRef,
    pub scope: Vec<String>,
}

/// What a catalog item establishes about its target `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Consequence {
    /// `g` restricted to `sub_domain` has no a-Monge permutation.
    BadRestriction { sub_domain: Vec<usize> },
    /// `π(g) = reference`, or `π(g^t) = reference` when transposed.
    Transform { reference: String, permutation: Chain, transposed: bool },
    /// `(h, g)` is exactly the `(h, f)` pair of Case 2 item `pair`.
    Pair { pair: usize },
}

/// `g(ȳ) + (α − 1) = max_Z Σ g_i` over all assignments to the primary variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictImplementation {
    pub target: Predicate,
    pub alpha: u32,
    pub primary: Vec<String>,
    #[serde(default)]
    pub auxiliary: Vec<String>,
    /// Locally named predicates; other names resolve to `u{…}` unary
    /// subsets or the shipped reference tables.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub predicates: BTreeMap<String, Predicate>,
    pub constraints: Vec<ImplConstraint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consequence: Option<Consequence>,
}

/// First primary assignment where the identity fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyFailure {
    pub primary_values: Vec<usize>,
    /// `g(ȳ) + α − 1`.
    pub expected: u64,
    pub achieved: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub verified: bool,
    pub failure: Option<VerifyFailure>,
    pub evaluations: u64,
}

/// Largest `d^(|Y|+|Z|)` that verification will exhaust.
pub const VERIFY_LIMIT: u128 = 1 << 24;

/// Constraints with predicates resolved and scopes mapped to indices into `Y ++ Z`.
pub(crate) struct Resolved {
    pub items: Vec<(Predicate, Vec<usize>)>,
}

impl StrictImplementation {
    pub fn domain_size(&self) -> usize {
        self.target.domain_size()
    }

    /// Looks up a predicate by name: local table, then `u{…}`, then reference data.
    pub fn resolve_name(&self, name: &str) -> Result<Predicate, ImplError> {
        resolve_name(&self.predicates, name, self.domain_size())
    }

    pub fn resolve(&self, p: &PredRef) -> Result<Predicate, ImplError> {
        match p {
            PredRef::Inline(p) => Ok(p.clone()),
            PredRef::Named(n) => self.resolve_name(n),
        }
    }

    pub(crate) fn resolved(&self) -> Result<Resolved, ImplError> {
        if self.alpha == 0 {
            return Err(ImplError::ZeroAlpha);
        }
        if self.constraints.is_empty() {
            return Err(ImplError::NoConstraints);
        }
        if self.primary.len() != self.target.arity() {
            return Err(ImplError::PrimaryArity { arity: self.target.arity(), primary: self.primary.len() });
        }
        let names: Vec<String> = self.primary.iter().chain(&self.auxiliary).cloned().collect();
        let mut index = HashMap::new();
        for (i, v) in names.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(ImplError::DuplicateVariable(v.clone()));
            }
        }
        let d = self.domain_size();
        let mut items = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            let p = self.resolve(&c.pred)?;
            let label = match &c.pred {
                PredRef::Named(n) => n.clone(),
                PredRef::Inline(p) => p.to_rows_string(),
            };
            if p.domain_size() != d {
                return Err(maxcsp_core::CoreError::DomainMismatch { name: label, expected: d, got: p.domain_size() }.into());
            }
            if p.arity() != c.scope.len() {
                return Err(ImplError::ScopeLength { name: label, arity: p.arity(), scope: c.scope.len() });
            }
            let scope = c
                .scope
                .iter()
                .map(|v| index.get(v).copied().ok_or_else(|| ImplError::UnboundVariable(v.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            items.push((p, scope));
        }
        Ok(Resolved { items })
    }
}

pub(crate) fn resolve_name(local: &BTreeMap<String, Predicate>, name: &str, d: usize) -> Result<Predicate, ImplError> {
    if let Some(p) = local.get(name) {
        return Ok(p.clone());
    }
    if let Some(sub) = standard::parse_unary_name(name) {
        return Ok(standard::unary_subset(d, &sub)?);
    }
    reference::by_name(name).cloned().ok_or_else(|| ImplError::UnknownPredicate(name.to_string()))
}

/// Exhaustively checks the defining identity. With no auxiliary variables
/// the maximum is the plain sum.
pub fn verify_strict_implementation(si: &StrictImplementation) -> Result<VerifyReport, ImplError> {
    let r = si.resolved()?;
    let d = si.domain_size();
    let (m, k) = (si.primary.len(), si.auxiliary.len());
    let total = (d as u128).pow((m + k) as u32);
    if total > VERIFY_LIMIT {
        return Err(ImplError::TooLarge(total));
    }
    let z_count = d.pow(k as u32);
    let mut values = vec![0; m + k];
    let mut tuple = Vec::new();
    for y in 0..d.pow(m as u32) {
        decode_into(y, d, &mut values[..m]);
        let mut best = 0u64;
        for z in 0..z_count {
            decode_into(z, d, &mut values[m..]);
            let mut sum = 0u64;
            for (p, scope) in &r.items {
                tuple.clear();
                tuple.extend(scope.iter().map(|&v| values[v]));
                sum += p.get(&tuple) as u64;
            }
            best = best.max(sum);
        }
        let expected = si.target.get(&values[..m]) as u64 + si.alpha as u64 - 1;
        if best != expected {
            return Ok(VerifyReport {
                verified: false,
                failure: Some(VerifyFailure { primary_values: values[..m].to_vec(), expected, achieved: best }),
                evaluations: (y as u64 + 1) * z_count as u64,
            });
        }
    }
    Ok(VerifyReport { verified: true, failure: None, evaluations: total as u64 })
}
