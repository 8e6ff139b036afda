use serde::{Deserialize, Serialize};

use maxcsp_core::{Chain, Predicate};

/// Output of one case analysis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case: u8,
    pub domain_size: usize,
    pub items: Vec<CaseItem>,
    /// Candidates entering and leaving each filter, in pipeline order.
    pub stages: Vec<Stage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
    /// Per-candidate outcome; filled in audit mode only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Vec<Provenance>>,
    pub timing: Timing,
}

impl CaseReport {
    /// True when the comparison against reference data passed, or there is none.
    pub fn passed(&self) -> bool {
        self.comparison.as_ref().is_none_or(|c| c.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub input: u64,
    pub rejected: u64,
    pub remaining: u64,
}

impl Stage {
    pub fn new(name: &str, input: u64, remaining: u64) -> Stage {
        Stage { name: name.to_string(), input, rejected: input - remaining, remaining }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CaseItem {
    Predicate {
        representative: Predicate,
        /// Size of the isomorphism/anti-isomorphism orbit.
        orbit_size: usize,
        /// Raw candidates that canonicalized to this class.
        raw_members: u64,
        /// Matching reference name, e.g. `h'7`.
        reference: Option<String>,
        /// The generation conditions re-verified through the classifier.
        rechecked: bool,
    },
    Pair {
        /// Reference name of the first component, e.g. `h2`.
        first: String,
        second: Predicate,
        raw_members: usize,
        /// Case 2 catalog items whose pair falls in this class.
        appendix_c: Vec<usize>,
        continuation: Continuation,
    },
    Triple {
        predicates: Vec<Predicate>,
    },
}

/// How hardness of a pair class is carried on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Continuation {
    /// Catalog implementations for the class, with their verification outcome.
    Catalog { items: Vec<String>, verified: bool },
    /// The second component is a relabelled inline-catalog source; the
    /// relabelled implementation yields another pair.
    Reduction {
        via: String,
        permutation: Chain,
        transposed: bool,
        implemented: Predicate,
        /// Class of the resulting pair, when it is itself a raw pair.
        target_class: Option<usize>,
        verified: bool,
    },
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub reference: String,
    pub expected: usize,
    pub produced: usize,
    /// Reference entries that landed in some output class.
    pub matched: usize,
    pub unmatched_reference: Vec<String>,
    /// Indices of output items with no reference entry.
    pub extra_items: Vec<usize>,
    /// Groups of reference entries sharing one output item.
    pub shared: Vec<Vec<String>>,
    pub passed: bool,
    /// Human-readable audit lines.
    pub diff: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub candidate: String,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
    pub jobs: usize,
}
