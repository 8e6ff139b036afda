use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use maxcsp_core::{canonical_class, reference, ConstraintLanguage, Predicate};
use maxcsp_supermod::{classify_with_fixed_values, condition_star, find_common_chain};

use crate::kernel::{Kernel, Table};
use crate::report::{CaseItem, CaseReport, Comparison, Provenance, Stage, Timing};
use crate::{in_pool, CasegenError, Options};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    AllOnesLine,
    Supermodular,
    FailsStar,
    Kept(Table),
}

/// Binary predicates on `{0,1,2,3}` without all-ones lines, supermodular on
/// no chain, and satisfying condition (∗), up to isomorphism and
/// anti-isomorphism; compared against the shipped `h'1…h'27`.
pub fn generate_case1(opts: &Options) -> Result<CaseReport, CasegenError> {
    let start = Instant::now();
    let k = Kernel::new(4)?;
    let outcomes: Vec<Outcome> = in_pool(opts.jobs, || {
        (0..k.table_count() as Table)
            .into_par_iter()
            .map(|t| {
                if k.has_all_ones_line(t) {
                    Outcome::AllOnesLine
                } else if k.chain_mask(t) != 0 {
                    Outcome::Supermodular
                } else if !k.condition_star(&[t]) {
                    Outcome::FailsStar
                } else {
                    Outcome::Kept(k.canonical(t))
                }
            })
            .collect()
    })?;
    let total = outcomes.len() as u64;
    let count = |o: fn(&Outcome) -> bool| outcomes.iter().filter(|x| o(x)).count() as u64;
    let after_lines = total - count(|o| *o == Outcome::AllOnesLine);
    let after_mask = after_lines - count(|o| *o == Outcome::Supermodular);
    let after_star = after_mask - count(|o| *o == Outcome::FailsStar);
    let mut classes: BTreeMap<Table, u64> = BTreeMap::new();
    for o in &outcomes {
        if let Outcome::Kept(c) = o {
            *classes.entry(*c).or_default() += 1;
        }
    }
    let stages = vec![
        Stage::new("no all-ones row or column", total, after_lines),
        Stage::new("supermodular on no chain", after_lines, after_mask),
        Stage::new("condition (*)", after_mask, after_star),
        Stage::new("isomorphism and anti-isomorphism classes", after_star, classes.len() as u64),
    ];

    let refs: BTreeMap<Table, String> = reference::h_prime_family()
        .iter()
        .map(|(name, p)| Ok((k.canonical(k.from_predicate(p)?), name.clone())))
        .collect::<Result<_, CasegenError>>()?;
    let mut items = Vec::with_capacity(classes.len());
    for (&c, &raw) in &classes {
        let representative = k.to_predicate(c);
        let rechecked = recheck(&representative)?;
        items.push(CaseItem::Predicate {
            orbit_size: canonical_class(&representative)?.orbit_size,
            representative,
            raw_members: raw,
            reference: refs.get(&c).cloned(),
            rechecked,
        });
    }
    let unmatched_reference: Vec<String> =
        refs.iter().filter(|(c, _)| !classes.contains_key(c)).map(|(_, n)| n.clone()).collect();
    let extra_items: Vec<usize> = classes.keys().enumerate().filter(|(_, c)| !refs.contains_key(c)).map(|(i, _)| i).collect();
    let mut diff = Vec::new();
    for n in &unmatched_reference {
        diff.push(format!("- {n}: no generated class"));
    }
    for &i in &extra_items {
        diff.push(format!("+ class {i} {}: not among the reference predicates", k.to_predicate(*classes.keys().nth(i).unwrap()).to_rows_string()));
    }
    let all_rechecked = items.iter().all(|i| matches!(i, CaseItem::Predicate { rechecked: true, .. }));
    if !all_rechecked {
        diff.push("! some classes fail the post-hoc classifier recheck".into());
    }
    let expected = reference::h_prime_family().len();
    let comparison = Comparison {
        reference: "h'1..h'27".into(),
        expected,
        produced: items.len(),
        matched: expected - unmatched_reference.len(),
        passed: items.len() == expected && unmatched_reference.is_empty() && extra_items.is_empty() && all_rechecked,
        unmatched_reference,
        extra_items,
        shared: Vec::new(),
        diff,
    };
    let provenance = opts.audit.then(|| {
        outcomes
            .iter()
            .enumerate()
            .map(|(t, o)| Provenance {
                candidate: k.to_predicate(t as Table).to_rows_string(),
                outcome: match o {
                    Outcome::AllOnesLine => "rejected: all-ones row or column".into(),
                    Outcome::Supermodular => "rejected: supermodular on some chain".into(),
                    Outcome::FailsStar => "rejected: fails condition (*)".into(),
                    Outcome::Kept(c) => format!("kept: class {}", classes.keys().position(|x| x == c).unwrap()),
                },
            })
            .collect()
    });
    Ok(CaseReport {
        case: 1,
        domain_size: 4,
        items,
        stages,
        comparison: Some(comparison),
        provenance,
        timing: Timing { elapsed_ms: start.elapsed().as_millis() as u64, jobs: opts.jobs },
    })
}

/// Re-derives the three generation conditions through the classifier crate.
fn recheck(f: &Predicate) -> Result<bool, CasegenError> {
    let lang = ConstraintLanguage::from_predicates(4, [f.clone()], true)?;
    let apx = !classify_with_fixed_values(&lang)?.is_tractable();
    let star = condition_star(&lang)?;
    let no_chain = find_common_chain(&lang)?.is_none();
    let line = (0..4).any(|i| (0..4).all(|j| f.at(i, j)) || (0..4).all(|j| f.at(j, i)));
    Ok(apx && star && no_chain && !line)
}
