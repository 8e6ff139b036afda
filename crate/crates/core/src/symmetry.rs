use std::collections::BTreeSet;

use serde::Serialize;

use crate::{Chain, CoreError, Predicate};

/// Least member of the orbit `{π(f), π(f^t)}` together with the symmetry reaching it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub representative: Predicate,
    /// `representative = π(g)` where `g` is `f` or `f^t`.
    pub permutation: Chain,
    pub transposed: bool,
    pub orbit_size: usize,
}

/// Canonical representative of a binary predicate under isomorphism and anti-isomorphism.
pub fn canonical_class(f: &Predicate) -> Result<CanonicalForm, CoreError> {
    let ft = f.transpose()?;
    let mut orbit = BTreeSet::new();
    let mut best: Option<CanonicalForm> = None;
    for pi in Chain::all(f.domain_size()) {
        for (g, transposed) in [(f, false), (&ft, true)] {
            let image = g.permute(&pi)?;
            let better = best.as_ref().is_none_or(|b| image < b.representative);
            orbit.insert(image.clone());
            if better {
                best = Some(CanonicalForm { representative: image, permutation: pi.clone(), transposed, orbit_size: 0 });
            }
        }
    }
    let mut best = best.expect("at least one permutation");
    best.orbit_size = orbit.len();
    Ok(best)
}

/// Canonical representative of an ordered pair of binary predicates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalPair {
    pub first: Predicate,
    pub second: Predicate,
    pub permutation: Chain,
    pub transposed: bool,
    pub swapped: bool,
    pub orbit_size: usize,
}

/// Least image of `(a, b)` under simultaneous relabelling, simultaneous
/// transposition and swapping of the two components.
pub fn canonical_pair(a: &Predicate, b: &Predicate) -> Result<CanonicalPair, CoreError> {
    canonical_pair_with(a, b, |_, _| true)
}

/// As [`canonical_pair`], but images rejected by `admissible` are skipped.
/// The identity image is always admissible.
pub fn canonical_pair_with(
    a: &Predicate,
    b: &Predicate,
    admissible: impl Fn(&Predicate, &Predicate) -> bool,
) -> Result<CanonicalPair, CoreError> {
    if a.domain_size() != b.domain_size() {
        return Err(CoreError::DomainMismatch {
            name: "second".into(),
            expected: a.domain_size(),
            got: b.domain_size(),
        });
    }
    let (at, bt) = (a.transpose()?, b.transpose()?);
    let mut orbit = BTreeSet::new();
    let mut best: Option<CanonicalPair> = None;
    for pi in Chain::all(a.domain_size()) {
        for (x, y, transposed) in [(a, b, false), (&at, &bt, true)] {
            let (px, py) = (x.permute(&pi)?, y.permute(&pi)?);
            for swapped in [false, true] {
                let (first, second) = if swapped { (py.clone(), px.clone()) } else { (px.clone(), py.clone()) };
                let identity = pi.is_identity() && !transposed && !swapped;
                if !identity && !admissible(&first, &second) {
                    continue;
                }
                orbit.insert((first.clone(), second.clone()));
                let better = best
                    .as_ref()
                    .is_none_or(|c| (&first, &second) < (&c.first, &c.second));
                if better {
                    best = Some(CanonicalPair {
                        first,
                        second,
                        permutation: pi.clone(),
                        transposed,
                        swapped,
                        orbit_size: 0,
                    });
                }
            }
        }
    }
    let mut best = best.expect("identity image");
    best.orbit_size = orbit.len();
    Ok(best)
}
