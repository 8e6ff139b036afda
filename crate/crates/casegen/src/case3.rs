use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rayon::prelude::*;

use crate::kernel::{Kernel, Table};
use crate::report::{CaseItem, CaseReport, Provenance, Stage, Timing};
use crate::{in_pool, CasegenError, Options};

/// Chain mask of the whole table followed by the masks of its proper restrictions.
type Signature = Vec<u32>;

fn candidates(k: &Kernel) -> (Vec<Table>, u64, u64) {
    let total = k.table_count();
    let no_line: Vec<Table> = (0..total as Table).filter(|&t| !k.has_all_ones_line(t)).collect();
    let after_line = no_line.len() as u64;
    let kept: Vec<Table> = no_line.into_iter().filter(|&t| k.chain_mask(t) != 0).collect();
    (kept, total, after_line)
}

fn is_helly_triple(a: u32, b: u32, c: u32) -> bool {
    a & b != 0 && a & c != 0 && b & c != 0 && a & b & c == 0
}

/// Sets `{f1, f2, f3}` of binary predicates on `d` elements, each without
/// all-ones lines and supermodular on some chain, every two sharing a chain,
/// all three sharing none, and jointly satisfying condition (∗).
///
/// Tables are grouped by the chain masks of the table and of all its proper
/// restrictions; both the chain conditions and condition (∗) depend on
/// these masks only, so triples are enumerated over groups.
pub fn search_case3(d: usize, opts: &Options) -> Result<CaseReport, CasegenError> {
    let start = Instant::now();
    let k = Kernel::new(d)?;
    let (cands, total, after_line) = candidates(&k);
    let mut groups: BTreeMap<Signature, Vec<Table>> = BTreeMap::new();
    for &t in &cands {
        let mut sig = vec![k.chain_mask(t)];
        sig.extend(k.restriction_masks(t));
        groups.entry(sig).or_default().push(t);
    }
    let mut by_mask: BTreeMap<u32, Vec<&Signature>> = BTreeMap::new();
    for s in groups.keys() {
        by_mask.entry(s[0]).or_default().push(s);
    }
    let masks: Vec<u32> = by_mask.keys().copied().collect();
    let mut mask_triples = Vec::new();
    let mut mask_multisets = 0u64;
    for (i, &a) in masks.iter().enumerate() {
        for (j, &b) in masks.iter().enumerate().skip(i) {
            for &c in &masks[j..] {
                mask_multisets += 1;
                if is_helly_triple(a, b, c) {
                    mask_triples.push((a, b, c));
                }
            }
        }
    }
    let sig_triples: Vec<[&Signature; 3]> = mask_triples
        .iter()
        .flat_map(|&(a, b, c)| {
            let (ga, gb, gc) = (&by_mask[&a], &by_mask[&b], &by_mask[&c]);
            ga.iter().flat_map(move |x| gb.iter().flat_map(move |y| gc.iter().map(move |z| [*x, *y, *z])))
        })
        .collect();
    let checked: Vec<Option<usize>> = in_pool(opts.jobs, || {
        sig_triples.par_iter().map(|[x, y, z]| (1..x.len()).find(|&i| x[i] & y[i] & z[i] == 0)).collect()
    })?;
    let mut found: BTreeSet<[Table; 3]> = BTreeSet::new();
    for (sig, fail) in sig_triples.iter().zip(&checked) {
        if fail.is_none() {
            for &a in &groups[sig[0]] {
                for &b in &groups[sig[1]] {
                    for &c in &groups[sig[2]] {
                        let mut t = [a, b, c];
                        t.sort_unstable();
                        found.insert(t);
                    }
                }
            }
        }
    }
    let passing = checked.iter().filter(|c| c.is_none()).count() as u64;
    let stages = vec![
        Stage::new("no all-ones row or column", total, after_line),
        Stage::new("supermodular on some chain", after_line, cands.len() as u64),
        Stage::new("restriction-mask signatures", cands.len() as u64, groups.len() as u64),
        Stage::new("chain-mask triples: pairwise common chain, no joint chain", mask_multisets, mask_triples.len() as u64),
        Stage::new("signature triples: condition (*)", sig_triples.len() as u64, passing),
    ];
    let provenance = opts.audit.then(|| {
        let subs = k.subdomains();
        sig_triples
            .iter()
            .zip(&checked)
            .map(|(s, fail)| Provenance {
                candidate: format!(
                    "signatures ({}, {}, {})",
                    k.to_predicate(groups[s[0]][0]).to_rows_string(),
                    k.to_predicate(groups[s[1]][0]).to_rows_string(),
                    k.to_predicate(groups[s[2]][0]).to_rows_string()
                ),
                outcome: match fail {
                    Some(i) => format!("rejected: no common chain on {:?}", subs[i - 1]),
                    None => "kept".into(),
                },
            })
            .collect()
    });
    Ok(CaseReport {
        case: 3,
        domain_size: d,
        items: found.iter().map(|t| CaseItem::Triple { predicates: t.iter().map(|&x| k.to_predicate(x)).collect() }).collect(),
        stages,
        comparison: None,
        provenance,
        timing: Timing { elapsed_ms: start.elapsed().as_millis() as u64, jobs: opts.jobs },
    })
}

/// The same search by direct enumeration of all candidate triples, as
/// sorted table triples.
pub fn search_case3_unpruned(d: usize, opts: &Options) -> Result<Vec<[Table; 3]>, CasegenError> {
    let k = Kernel::new(d)?;
    let (cands, _, _) = candidates(&k);
    let masks: Vec<u32> = cands.iter().map(|&t| k.chain_mask(t)).collect();
    let n = cands.len();
    in_pool(opts.jobs, || {
        (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let (k, cands, masks) = (&k, &cands, &masks);
                (i + 1..n).flat_map(move |j| {
                    (j + 1..n).filter_map(move |l| {
                        (is_helly_triple(masks[i], masks[j], masks[l])
                            && k.condition_star(&[cands[i], cands[j], cands[l]]))
                        .then_some([cands[i], cands[j], cands[l]])
                    })
                })
            })
            .collect()
    })
}
