use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::{CoreError, Predicate};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub pred: String,
    pub scope: Vec<String>,
    #[serde(default = "unit_weight")]
    pub weight: u64,
}

fn unit_weight() -> u64 {
    1
}

/// A weighted Max CSP instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceRepr", into = "InstanceRepr")]
pub struct Instance {
    domain_size: usize,
    predicates: BTreeMap<String, Predicate>,
    variables: Vec<String>,
    constraints: Vec<Constraint>,
    #[serde(skip)]
    compiled: Vec<CompiledConstraint>,
}

/// A constraint with its scope resolved to variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledConstraint {
    pub pred: String,
    pub scope: Vec<usize>,
    pub weight: u64,
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    domain_size: usize,
    predicates: BTreeMap<String, Predicate>,
    variables: Vec<String>,
    constraints: Vec<Constraint>,
}

impl TryFrom<InstanceRepr> for Instance {
    type Error = CoreError;

    fn try_from(r: InstanceRepr) -> Result<Self, CoreError> {
        Instance::new(r.domain_size, r.predicates, r.variables, r.constraints)
    }
}

impl From<Instance> for InstanceRepr {
    fn from(i: Instance) -> Self {
        InstanceRepr {
            domain_size: i.domain_size,
            predicates: i.predicates,
            variables: i.variables,
            constraints: i.constraints,
        }
    }
}

impl Instance {
    pub fn new(
        domain_size: usize,
        predicates: BTreeMap<String, Predicate>,
        variables: Vec<String>,
        constraints: Vec<Constraint>,
    ) -> Result<Self, CoreError> {
        if domain_size == 0 {
            return Err(CoreError::EmptyDomain);
        }
        for (name, p) in &predicates {
            if p.domain_size() != domain_size {
                return Err(CoreError::DomainMismatch { name: name.clone(), expected: domain_size, got: p.domain_size() });
            }
        }
        let mut index = HashMap::new();
        for (i, v) in variables.iter().enumerate() {
            if index.insert(v.as_str(), i).is_some() {
                return Err(CoreError::DuplicateVariable(v.clone()));
            }
        }
        let mut compiled = Vec::with_capacity(constraints.len());
        for (ci, c) in constraints.iter().enumerate() {
            let p = predicates.get(&c.pred).ok_or_else(|| CoreError::UnknownPredicate(c.pred.clone()))?;
            if p.arity() != c.scope.len() {
                return Err(CoreError::ScopeLength {
                    index: ci,
                    pred: c.pred.clone(),
                    arity: p.arity(),
                    scope: c.scope.len(),
                });
            }
            if c.weight == 0 {
                return Err(CoreError::ZeroWeight { index: ci });
            }
            let scope = c
                .scope
                .iter()
                .map(|v| index.get(v.as_str()).copied().ok_or_else(|| CoreError::UnknownVariable(v.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            compiled.push(CompiledConstraint { pred: c.pred.clone(), scope, weight: c.weight });
        }
        Ok(Instance { domain_size, predicates, variables, constraints, compiled })
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn predicates(&self) -> &BTreeMap<String, Predicate> {
        &self.predicates
    }

    pub fn predicate(&self, name: &str) -> Option<&Predicate> {
        self.predicates.get(name)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn compiled(&self) -> &[CompiledConstraint] {
        &self.compiled
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn total_weight(&self) -> u64 {
        self.constraints.iter().map(|c| c.weight).sum()
    }

    /// Largest predicate arity used by a constraint (0 for an empty instance).
    pub fn max_arity(&self) -> usize {
        self.compiled.iter().map(|c| c.scope.len()).max().unwrap_or(0)
    }

    /// Total weight of constraints satisfied by `values` (indexed like `variables`).
    pub fn evaluate(&self, values: &[usize]) -> Result<u64, CoreError> {
        if values.len() != self.variables.len() {
            return Err(CoreError::AssignmentLength { expected: self.variables.len(), got: values.len() });
        }
        if let Some(&v) = values.iter().find(|&&v| v >= self.domain_size) {
            return Err(CoreError::ValueOutOfRange { value: v, domain_size: self.domain_size });
        }
        Ok(self.evaluate_unchecked(values))
    }

    pub fn evaluate_unchecked(&self, values: &[usize]) -> u64 {
        let mut tuple = Vec::with_capacity(4);
        self.compiled
            .iter()
            .filter(|c| {
                tuple.clear();
                tuple.extend(c.scope.iter().map(|&v| values[v]));
                self.predicates[&c.pred].get(&tuple)
            })
            .map(|c| c.weight)
            .sum()
    }

    /// Occurrence count per variable: `t` occurrences in a scope of weight `s` add `t·s`.
    pub fn occurrences(&self) -> Vec<u64> {
        let mut counts = vec![0; self.variables.len()];
        for c in &self.compiled {
            for &v in &c.scope {
                counts[v] += c.weight;
            }
        }
        counts
    }
}

/// A total valuation of an instance's variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub values: BTreeMap<String, usize>,
}

impl Assignment {
    pub fn from_values(instance: &Instance, values: &[usize]) -> Result<Self, CoreError> {
        if values.len() != instance.variables().len() {
            return Err(CoreError::AssignmentLength { expected: instance.variables().len(), got: values.len() });
        }
        if let Some(&v) = values.iter().find(|&&v| v >= instance.domain_size()) {
            return Err(CoreError::ValueOutOfRange { value: v, domain_size: instance.domain_size() });
        }
        let values = instance.variables().iter().cloned().zip(values.iter().copied()).collect();
        Ok(Assignment { values })
    }

    /// Values in the instance's variable order.
    pub fn ordered(&self, instance: &Instance) -> Result<Vec<usize>, CoreError> {
        instance
            .variables()
            .iter()
            .map(|v| self.values.get(v).copied().ok_or_else(|| CoreError::UnknownVariable(v.clone())))
            .collect()
    }
}
