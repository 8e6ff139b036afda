use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{standard, CoreError, Predicate};

/// A finite set of named predicates over a common domain.
///
/// With `include_fixed_values` the language is read as `F ∪ C_D`, where
/// `C_D` holds the fixed-value constraints `x = c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LanguageRepr", into = "LanguageRepr")]
pub struct ConstraintLanguage {
    domain_size: usize,
    predicates: BTreeMap<String, Predicate>,
    include_fixed_values: bool,
}

#[derive(Serialize, Deserialize)]
struct LanguageRepr {
    domain_size: usize,
    #[serde(default)]
    fixed_values: bool,
    predicates: BTreeMap<String, Predicate>,
}

impl TryFrom<LanguageRepr> for ConstraintLanguage {
    type Error = CoreError;

    fn try_from(r: LanguageRepr) -> Result<Self, CoreError> {
        ConstraintLanguage::new(r.domain_size, r.predicates, r.fixed_values)
    }
}

impl From<ConstraintLanguage> for LanguageRepr {
    fn from(l: ConstraintLanguage) -> Self {
        LanguageRepr { domain_size: l.domain_size, fixed_values: l.include_fixed_values, predicates: l.predicates }
    }
}

impl ConstraintLanguage {
    pub fn new(
        domain_size: usize,
        predicates: BTreeMap<String, Predicate>,
        include_fixed_values: bool,
    ) -> Result<Self, CoreError> {
        if domain_size == 0 {
            return Err(CoreError::EmptyDomain);
        }
        for (name, p) in &predicates {
            if p.domain_size() != domain_size {
                return Err(CoreError::DomainMismatch {
                    name: name.clone(),
                    expected: domain_size,
                    got: p.domain_size(),
                });
            }
            if p.is_trivial() {
                return Err(CoreError::TrivialPredicate(name.clone()));
            }
        }
        Ok(ConstraintLanguage { domain_size, predicates, include_fixed_values })
    }

    /// Builds a language naming the predicates `f0, f1, …` in order.
    pub fn from_predicates(
        domain_size: usize,
        predicates: impl IntoIterator<Item = Predicate>,
        include_fixed_values: bool,
    ) -> Result<Self, CoreError> {
        let map = predicates
            .into_iter()
            .enumerate()
            .map(|(i, p)| (format!("f{i}"), p))
            .collect();
        ConstraintLanguage::new(domain_size, map, include_fixed_values)
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn predicates(&self) -> &BTreeMap<String, Predicate> {
        &self.predicates
    }

    pub fn get(&self, name: &str) -> Option<&Predicate> {
        self.predicates.get(name)
    }

    pub fn include_fixed_values(&self) -> bool {
        self.include_fixed_values
    }

    pub fn len(&self) -> usize {
        self.predicates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty()
    }

    /// The explicit predicates plus, when flagged, `u{c}` for every constant `c`.
    pub fn with_fixed_values_expanded(&self) -> BTreeMap<String, Predicate> {
        let mut out = self.predicates.clone();
        if self.include_fixed_values {
            for c in 0..self.domain_size {
                let p = standard::fixed_value(self.domain_size, c).expect("constant in range");
                out.entry(standard::unary_name(&[c])).or_insert(p);
            }
        }
        out
    }

    /// Every predicate restricted to `sub`, with trivial restrictions dropped.
    pub fn restrict(&self, sub: &[usize]) -> Result<ConstraintLanguage, CoreError> {
        let mut map = BTreeMap::new();
        let mut size = 0;
        for (name, p) in &self.predicates {
            let r = p.restrict(sub)?;
            size = r.predicate.domain_size();
            if !r.trivial {
                map.insert(name.clone(), r.predicate);
            }
        }
        if self.predicates.is_empty() {
            let mut s = sub.to_vec();
            s.sort_unstable();
            s.dedup();
            size = s.len();
        }
        ConstraintLanguage::new(size, map, self.include_fixed_values)
    }
}
