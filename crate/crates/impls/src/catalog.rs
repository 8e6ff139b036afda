use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use maxcsp_core::{format, reference, transform_predicate, Predicate, Transform};
use maxcsp_monge::{find_amonge_permutation, AmongeResult, SquareMatrix};

use crate::{verify_strict_implementation, Consequence, ImplError, StrictImplementation};

macro_rules! catalog_files {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../data/catalog/", $name, ".json")))),*]
    };
}

const FILES: &[(&str, &str)] = catalog_files![
    "B01", "B02", "B03", "B04", "B05", "B06", "B07", "B08", "B09", "B10", "B11", "B12", "B13", "B14",
    "B15", "B16", "B17", "B18", "B19", "B20", "B21", "B22", "B23", "B24", "B25", "B26", "B27",
    "C01", "C02", "C03", "C04", "C05", "C06", "C07", "C08", "C09", "C10", "C11", "C12", "C13", "C14",
    "C15", "C16", "C17", "C18", "C19", "C20", "C21", "C22", "C23", "C24", "C25", "C26", "C27",
    "inline-h17", "inline-h11", "inline-h5", "inline-h12",
];

/// The shipped reference catalog: 27 hardness implementations from `{h'_i} ∪ U_D`,
/// 27 for pairs `(h, f)`, and four that eliminate `h5, h11, h12, h17`.
pub fn appendix_catalog() -> &'static [StrictImplementation] {
    static CATALOG: OnceLock<Vec<StrictImplementation>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        FILES
            .iter()
            .map(|(name, text)| {
                format::parse(text).unwrap_or_else(|e| panic!("catalog file {name} is malformed: {e}"))
            })
            .collect()
    })
}

/// Looks up a catalog item by its source tag, e.g. `B#11` or `inline-h17`.
pub fn catalog_entry(source: &str) -> Result<&'static StrictImplementation, ImplError> {
    appendix_catalog()
        .iter()
        .find(|si| si.source.as_deref() == Some(source))
        .ok_or_else(|| ImplError::MissingEntry(source.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsequenceCheck {
    pub holds: bool,
    pub detail: String,
}

/// Checks the item's recorded consequence against its target.
pub fn check_consequence(si: &StrictImplementation) -> Result<ConsequenceCheck, ImplError> {
    let Some(c) = &si.consequence else {
        return Ok(ConsequenceCheck { holds: true, detail: "no consequence recorded".into() });
    };
    let g = &si.target;
    Ok(match c {
        Consequence::BadRestriction { sub_domain } => {
            let r = transform_predicate(g, &Transform::Restrict(sub_domain.clone()))?;
            let m = SquareMatrix::from_predicate(&r.predicate)?;
            match find_amonge_permutation(&m)? {
                AmongeResult::BadWitness { .. } => ConsequenceCheck {
                    holds: true,
                    detail: format!("restriction to {sub_domain:?} has no a-Monge permutation"),
                },
                AmongeResult::Permutation { permutation } => ConsequenceCheck {
                    holds: false,
                    detail: format!("restriction to {sub_domain:?} is a-Monge under {:?}", permutation.as_slice()),
                },
            }
        }
        Consequence::Transform { reference: name, permutation, transposed } => {
            let want = reference::by_name(name).ok_or_else(|| ImplError::UnknownPredicate(name.clone()))?;
            let base = if *transposed { transform_predicate(g, &Transform::Transpose)?.predicate } else { g.clone() };
            let got = transform_predicate(&base, &Transform::Permute(permutation.clone()))?.predicate;
            let t = if *transposed { "g^t" } else { "g" };
            ConsequenceCheck {
                holds: &got == want,
                detail: format!("pi({t}) {} {name} for pi = {:?}", if &got == want { "=" } else { "!=" }, permutation.as_slice()),
            }
        }
        Consequence::Pair { pair } => {
            let other = catalog_entry(&format!("C#{pair}"))?;
            let h_same = si.predicates.contains_key("h") && si.predicates.get("h") == other.predicates.get("h");
            let f_match = other.predicates.get("f") == Some(g);
            ConsequenceCheck {
                holds: h_same && f_match,
                detail: format!(
                    "(h, g) {} (h, f) of C#{pair}",
                    if h_same && f_match { "equals" } else { "differs from" }
                ),
            }
        }
    })
}

/// Verification and consequence check of one catalog item.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogItemReport {
    pub source: String,
    pub alpha: u32,
    pub verified: bool,
    pub consequence_holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub total: usize,
    pub verified: usize,
    pub consequences_hold: usize,
    pub items: Vec<CatalogItemReport>,
}

impl CatalogReport {
    pub fn all_ok(&self) -> bool {
        self.verified == self.total && self.consequences_hold == self.total
    }
}

pub fn check_item(si: &StrictImplementation) -> Result<CatalogItemReport, ImplError> {
    let v = verify_strict_implementation(si)?;
    let c = check_consequence(si)?;
    Ok(CatalogItemReport {
        source: si.source.clone().unwrap_or_default(),
        alpha: si.alpha,
        verified: v.verified,
        consequence_holds: c.holds,
        detail: c.detail,
    })
}

/// Verifies every catalog item and its consequence.
pub fn verify_catalog() -> Result<CatalogReport, ImplError> {
    let items = appendix_catalog().iter().map(check_item).collect::<Result<Vec<_>, _>>()?;
    Ok(CatalogReport {
        total: items.len(),
        verified: items.iter().filter(|i| i.verified).count(),
        consequences_hold: items.iter().filter(|i| i.consequence_holds).count(),
        items,
    })
}

/// The `(h, f)` pair of a Case 2 catalog item.
pub fn appendix_c_pair(n: usize) -> Result<(Predicate, Predicate), ImplError> {
    let si = catalog_entry(&format!("C#{n}"))?;
    let get = |k: &str| si.predicates.get(k).cloned().ok_or_else(|| ImplError::UnknownPredicate(k.to_string()));
    Ok((get("h")?, get("f")?))
}
