use serde::{Deserialize, Serialize};

use maxcsp_core::{Chain, ConstraintLanguage, Predicate};
use maxcsp_monge::{
    find_common_amonge_permutation_bounded, has_common_permutation_on, CommonResult, SquareMatrix,
    DEFAULT_BRUTE_FORCE_BOUND,
};

use crate::{binary_slices, strip_all_ones, StripStep, SupermodError};

/// Where a witness matrix came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceProvenance {
    /// Name of the source predicate in the language.
    pub predicate: String,
    pub free: (usize, usize),
    pub fixed_positions: Vec<usize>,
    pub fixed_constants: Vec<usize>,
    /// The binary slice before stripping.
    pub slice: Predicate,
    pub stripped: Vec<StripStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardnessWitness {
    /// Source predicate names, one per witness matrix (repeats possible when
    /// several slices of one predicate take part).
    pub predicates: Vec<String>,
    pub sub_domain: Vec<usize>,
    pub slice_provenance: Vec<SliceProvenance>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Tractable,
    ApxComplete,
}

/// Classification of `F ∪ C_D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub chain: Option<Chain>,
    pub witness: Option<HardnessWitness>,
    /// Always true: the verdict concerns the language together with all
    /// fixed-value constraints, whether or not the input listed them.
    pub fixed_values_assumed: bool,
    pub note: String,
}

impl ClassificationReport {
    pub fn is_tractable(&self) -> bool {
        self.verdict == Verdict::Tractable
    }
}

const NOTE: &str = "verdict applies to the language extended by every fixed-value constraint x = c; \
                    nothing is claimed about the language without them";

struct PoolEntry {
    provenance: SliceProvenance,
    matrix: SquareMatrix,
}

fn slice_pool(lang: &ConstraintLanguage) -> Result<Vec<(String, crate::Slice)>, SupermodError> {
    let mut out = Vec::new();
    for (name, f) in lang.predicates() {
        if f.arity() < 2 {
            continue;
        }
        for s in binary_slices(f)? {
            out.push((name.clone(), s));
        }
    }
    Ok(out)
}

/// A chain on which every predicate of `lang` is supermodular, if one exists.
pub fn find_common_chain(lang: &ConstraintLanguage) -> Result<Option<Chain>, SupermodError> {
    let d = lang.domain_size();
    let mats = slice_pool(lang)?
        .iter()
        .map(|(_, s)| SquareMatrix::from_predicate(&s.predicate))
        .collect::<Result<Vec<_>, _>>()?;
    if mats.is_empty() {
        return Ok(Some(Chain::identity(d)));
    }
    Ok(find_common_amonge_permutation_bounded(&mats, DEFAULT_BRUTE_FORCE_BOUND)?.permutation().cloned())
}

/// Tractable with a chain, or APX-complete with a witness of at most three
/// slices and at most four domain elements.
///
/// Witness order: smaller sub-domain, then fewer slices, then lexicographic.
pub fn classify_with_fixed_values(lang: &ConstraintLanguage) -> Result<ClassificationReport, SupermodError> {
    if lang.is_empty() {
        return Err(SupermodError::EmptyLanguage);
    }
    if let Some(chain) = find_common_chain(lang)? {
        return Ok(ClassificationReport {
            verdict: Verdict::Tractable,
            chain: Some(chain),
            witness: None,
            fixed_values_assumed: true,
            note: NOTE.into(),
        });
    }
    let mut pool = Vec::new();
    for (name, s) in slice_pool(lang)? {
        let st = strip_all_ones(&s.predicate)?;
        if st.trivial {
            continue;
        }
        pool.push(PoolEntry {
            matrix: SquareMatrix::from_predicate(&st.predicate)?,
            provenance: SliceProvenance {
                predicate: name,
                free: s.free,
                fixed_positions: s.fixed_positions,
                fixed_constants: s.fixed_constants,
                slice: s.predicate,
                stripped: st.log,
            },
        });
    }
    let mats: Vec<SquareMatrix> = pool.iter().map(|e| e.matrix.clone()).collect();
    let (matrices, indices) = match find_common_amonge_permutation_bounded(&mats, DEFAULT_BRUTE_FORCE_BOUND)? {
        CommonResult::Witness { matrices, indices } => (matrices, indices),
        CommonResult::Permutation { permutation } => {
            return Err(SupermodError::WitnessUnverified(format!("stripped slices admit chain {permutation}")))
        }
    };
    let mut sub_domain = indices.clone();
    sub_domain.sort_unstable();
    let slice_provenance: Vec<SliceProvenance> = matrices.iter().map(|&i| pool[i].provenance.clone()).collect();
    let witness = HardnessWitness {
        predicates: slice_provenance.iter().map(|p| p.predicate.clone()).collect(),
        sub_domain,
        slice_provenance,
    };
    if !verify_witness(&witness)? {
        return Err(SupermodError::WitnessUnverified(format!("{witness:?}")));
    }
    Ok(ClassificationReport {
        verdict: Verdict::ApxComplete,
        chain: None,
        witness: Some(witness),
        fixed_values_assumed: true,
        note: NOTE.into(),
    })
}

/// The unstripped slices, restricted to the sub-domain, share no a-Monge order.
pub fn verify_witness(w: &HardnessWitness) -> Result<bool, SupermodError> {
    let mats = w
        .slice_provenance
        .iter()
        .map(|p| SquareMatrix::from_predicate(&p.slice))
        .collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&SquareMatrix> = mats.iter().collect();
    Ok(w.sub_domain.len() <= 4 && refs.len() <= 3 && !has_common_permutation_on(&refs, &w.sub_domain))
}

/// Whether every restriction to a proper sub-domain of size at least 2
/// (trivial restrictions dropped) has a common chain.
pub fn condition_star(lang: &ConstraintLanguage) -> Result<bool, SupermodError> {
    let d = lang.domain_size();
    for mask in 1u64..(1 << d) - 1 {
        if mask.count_ones() < 2 {
            continue;
        }
        let sub: Vec<usize> = (0..d).filter(|&x| mask >> x & 1 == 1).collect();
        if find_common_chain(&lang.restrict(&sub)?)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
