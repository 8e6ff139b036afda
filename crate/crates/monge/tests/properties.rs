use std::collections::BTreeSet;

use maxcsp_core::Chain;
use maxcsp_monge::*;
use proptest::prelude::*;

/// Definition-level check on a materialized matrix, independent of the library.
fn oracle_amonge(rows: &[Vec<i64>]) -> bool {
    let n = rows.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                for l in k + 1..n {
                    let d = rows[i][k] as i128 + rows[j][l] as i128 - rows[i][l] as i128 - rows[j][k] as i128;
                    if d < 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn permute_rows(m: &SquareMatrix, order: &[usize]) -> Vec<Vec<i64>> {
    order.iter().map(|&i| order.iter().map(|&j| m.get(i, j)).collect()).collect()
}

fn all_perms(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (pos, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(pos);
        for mut tail in all_perms(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

fn oracle_verifying(m: &SquareMatrix) -> Vec<Vec<usize>> {
    let idx: Vec<usize> = (0..m.size()).collect();
    all_perms(&idx).into_iter().filter(|p| oracle_amonge(&permute_rows(m, p))).collect()
}

fn oracle_bad(ms: &[&SquareMatrix], b: &[usize]) -> bool {
    !all_perms(b).iter().any(|p| ms.iter().all(|m| oracle_amonge(&permute_rows(m, p))))
}

fn matrix(n: std::ops::RangeInclusive<usize>, lo: i64, hi: i64) -> impl Strategy<Value = SquareMatrix> {
    n.prop_flat_map(move |n| {
        prop::collection::vec(lo..=hi, n * n)
            .prop_map(move |v| SquareMatrix::from_fn(n, |i, j| v[i * n + j]))
    })
}

/// A matrix with two distinct indices into it.
fn with_pair(m: impl Strategy<Value = SquareMatrix>) -> impl Strategy<Value = (SquareMatrix, usize, usize)> {
    m.prop_flat_map(|m| {
        let n = m.size();
        (Just(m), 0..n, 1..n).prop_map(move |(m, s, off)| (m, s, (s + off) % n))
    })
}

fn matrix01(n: usize, bits: u32) -> SquareMatrix {
    SquareMatrix::from_fn(n, |i, j| (bits >> (i * n + j) & 1) as i64)
}

/// Non-negative combination of staircase matrices plus a sum matrix: always a-Monge.
fn amonge_matrix(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = SquareMatrix> {
    n.prop_flat_map(|n| {
        (
            prop::collection::vec(prop::sample::select(vec![0i64, 0, 0, 1, 2]), n * n),
            prop::collection::vec(-3i64..3, n),
            prop::collection::vec(-3i64..3, n),
        )
            .prop_map(move |(c, u, v)| {
                let mut m = sum_matrix(&u, &v).unwrap();
                for p in 0..n {
                    for q in 0..n {
                        let w = c[p * n + q];
                        let part = if (p + q) % 2 == 0 { l_matrix(n, p, q) } else { r_matrix(n, p, q) };
                        for i in 0..n {
                            for j in 0..n {
                                m.set(i, j, m.get(i, j) + w * part.get(i, j));
                            }
                        }
                    }
                }
                m
            })
    })
}

fn check_single(m: &SquareMatrix) -> Result<(), TestCaseError> {
    let truth = oracle_verifying(m);
    match find_amonge_permutation(m).unwrap() {
        AmongeResult::Permutation { permutation } => {
            prop_assert_eq!(Some(permutation.as_slice().to_vec()), truth.first().cloned());
            prop_assert!(oracle_amonge(&permute_rows(m, permutation.as_slice())));
            prop_assert!(oracle_amonge(&permute_rows(m, permutation.reverse().as_slice())));
        }
        AmongeResult::BadWitness { indices } => {
            prop_assert!(truth.is_empty());
            prop_assert!((2..=4).contains(&indices.len()));
            prop_assert!(oracle_bad(&[m], &indices));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn full_and_adjacent_checks_agree(m in matrix(3..=7, -4, 4)) {
        let full = is_anti_monge(&m, CheckMethod::Full);
        prop_assert_eq!(full, is_anti_monge(&m, CheckMethod::Adjacent));
        prop_assert_eq!(full, oracle_amonge(&m.rows()));
    }

    #[test]
    fn recognition_matches_exhaustion_size5(m in matrix(5..=5, -3, 3)) {
        check_single(&m)?;
    }

    #[test]
    fn recognition_matches_exhaustion_01(m in matrix(2..=5, 0, 1)) {
        check_single(&m)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn decomposition_agrees_with_check(m in matrix(2..=6, 0, 1)) {
        let d = decompose_01_amonge(&m).unwrap();
        match d {
            MongeDecomposition::HasAllOnesLine { .. } => {}
            MongeDecomposition::NotAMonge { counterexample: q } => {
                prop_assert!(!is_anti_monge(&m, CheckMethod::Full));
                prop_assert!(delta(&m, q.i, q.j, q.k, q.l).unwrap() < 0);
            }
            other => {
                prop_assert!(is_anti_monge(&m, CheckMethod::Full));
                prop_assert_eq!(other.reconstruct(m.size()).unwrap(), m);
            }
        }
    }

    #[test]
    fn line_equivalence_matches_delta((m, s, t) in with_pair(matrix(2..=5, -2, 2))) {
        let n = m.size();
        let rows = (0..n).all(|k| (0..n).all(|l| delta(&m, s, t, k, l).unwrap() == 0));
        let cols = (0..n).all(|k| (0..n).all(|l| delta(&m, k, l, s, t).unwrap() == 0));
        let r = line_equivalent(&m, Axis::Row, s, t).unwrap();
        prop_assert_eq!(r.is_some(), rows);
        if let Some(alpha) = r {
            prop_assert!((0..n).all(|i| m.get(s, i) as i128 == m.get(t, i) as i128 + alpha));
        }
        prop_assert_eq!(line_equivalent(&m, Axis::Column, s, t).unwrap().is_some(), cols);
    }

    #[test]
    fn family_extensions_are_exactly_the_amonge_permutations(m in amonge_matrix(2..=5)) {
        prop_assert!(is_anti_monge(&m, CheckMethod::Full));
        let (o, r) = amonge_permutation_family(&m).unwrap();
        prop_assert_eq!(&o.reverse(), &r);
        let mut ext: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in o.linear_extensions().into_iter().chain(r.linear_extensions()) {
            ext.insert(c.as_slice().to_vec());
        }
        let truth: BTreeSet<Vec<usize>> = oracle_verifying(&m).into_iter().collect();
        prop_assert_eq!(ext, truth);
    }

    #[test]
    fn common_permutation_matches_exhaustion(ms in (2usize..=4).prop_flat_map(|n| prop::collection::vec(
        prop::collection::vec(0i64..=1, n * n).prop_map(move |v| SquareMatrix::from_fn(n, |i, j| v[i * n + j])), 1..=5))) {
        let idx: Vec<usize> = (0..ms[0].size()).collect();
        let truth = all_perms(&idx)
            .into_iter()
            .find(|p| ms.iter().all(|m| oracle_amonge(&permute_rows(m, p))));
        match find_common_amonge_permutation(&ms).unwrap() {
            CommonResult::Permutation { permutation } => {
                prop_assert_eq!(Some(permutation.as_slice().to_vec()), truth);
            }
            CommonResult::Witness { matrices, indices } => {
                prop_assert!(truth.is_none());
                prop_assert!((1..=3).contains(&matrices.len()));
                prop_assert!((2..=4).contains(&indices.len()));
                let sub: Vec<&SquareMatrix> = matrices.iter().map(|&i| &ms[i]).collect();
                prop_assert!(oracle_bad(&sub, &indices));
            }
        }
    }

    #[test]
    fn singleton_family_agrees(m in matrix(2..=5, -2, 2)) {
        let single = find_amonge_permutation(&m).unwrap();
        let common = find_common_amonge_permutation(std::slice::from_ref(&m)).unwrap();
        match (single, common) {
            (AmongeResult::Permutation { permutation: a }, CommonResult::Permutation { permutation: b }) => prop_assert_eq!(a, b),
            (AmongeResult::BadWitness { indices: a }, CommonResult::Witness { matrices, indices: b }) => {
                prop_assert_eq!(a, b);
                prop_assert_eq!(matrices, vec![0]);
            }
            (a, b) => prop_assert!(false, "disagreement {:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn two_multipartite_orders_share_a_comparable_pair(
        n in 2usize..=6,
        a in prop::collection::vec(0usize..6, 6),
        b in prop::collection::vec(0usize..6, 6),
    ) {
        let build = |labels: &[usize]| {
            let mut classes: Vec<Vec<usize>> = vec![Vec::new(); 6];
            for (x, &c) in labels.iter().take(n).enumerate() {
                classes[c].push(x);
            }
            MultipartiteOrder::new(classes.into_iter().filter(|c| !c.is_empty()).collect()).unwrap()
        };
        let (oa, ob) = (build(&a), build(&b));
        prop_assume!(!oa.is_degenerate() && !ob.is_degenerate());
        let shared = (0..n).any(|x| (x + 1..n).any(|y| {
            (oa.precedes(x, y) || oa.precedes(y, x)) && (ob.precedes(x, y) || ob.precedes(y, x))
        }));
        prop_assert!(shared);
        match merge_orders(&[oa.clone(), ob.clone()]).unwrap() {
            MergeResult::Conflict { a, b, first, second } => {
                let o = [&oa, &ob];
                prop_assert!(o[first].precedes(a, b) && o[second].precedes(b, a));
            }
            MergeResult::Acyclic { graph } => prop_assert!(graph.is_acyclic()),
        }
    }

    #[test]
    fn propagation_refutation_means_no_permutation((m, i, j) in with_pair(matrix(3..=5, -2, 2))) {
        let truth = oracle_verifying(&m);
        match com_propagate(&m, i, j).unwrap() {
            ComResult::Refuted { cycle, .. } => {
                prop_assert!(truth.is_empty());
                prop_assert!(cycle.len() >= 2);
            }
            ComResult::Consistent { graph } => {
                // Any a-Monge permutation placing i before j respects every derived arc.
                for p in truth {
                    let rank = Chain::new(p).unwrap().ranks();
                    if rank[i] < rank[j] {
                        for &(a, b) in graph.arcs.keys() {
                            prop_assert!(rank[a] < rank[b]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn matrix_json_round_trip(m in matrix(1..=5, -100, 100)) {
        let text = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(serde_json::from_str::<SquareMatrix>(&text).unwrap(), m);
    }
}

#[test]
fn structure_lemma_exhaustive_for_sizes_3_and_4() {
    for n in [3usize, 4] {
        let mut structured = 0;
        for bits in 0..1u32 << (n * n) {
            let m = matrix01(n, bits);
            let has_ones_line = (0..n).any(|i| (0..n).all(|j| m.get(i, j) == 1) || (0..n).all(|j| m.get(j, i) == 1));
            if bits == 0 || has_ones_line || !oracle_amonge(&m.rows()) {
                continue;
            }
            structured += 1;
            // Count every parameterization that rebuilds m.
            let mut fits = 0;
            for p in 0..n - 1 {
                for q in 0..n - 1 {
                    fits += (l_matrix(n, p, q) == m) as usize;
                    for s in 1..n {
                        for t in 1..n {
                            if (p < s || q < t) && l_matrix(n, p, q).checked_add(&r_matrix(n, s, t)).unwrap() == m {
                                fits += 1;
                            }
                        }
                    }
                }
            }
            for s in 1..n {
                for t in 1..n {
                    fits += (r_matrix(n, s, t) == m) as usize;
                }
            }
            assert_eq!(fits, 1, "matrix {:?}", m.rows());
            let d = decompose_01_amonge(&m).unwrap();
            assert!(matches!(
                d,
                MongeDecomposition::L { .. } | MongeDecomposition::R { .. } | MongeDecomposition::LplusR { .. }
            ));
            assert_eq!(d.reconstruct(n).unwrap(), m);
        }
        assert!(structured > 0);
    }
}

#[test]
fn recognition_on_every_01_matrix_up_to_4() {
    for n in 1usize..=4 {
        for bits in 0..1u32 << (n * n) {
            let m = matrix01(n, bits);
            let truth = oracle_verifying(&m);
            match find_amonge_permutation(&m).unwrap() {
                AmongeResult::Permutation { permutation } => {
                    assert_eq!(Some(permutation.as_slice().to_vec()), truth.first().cloned())
                }
                AmongeResult::BadWitness { indices } => {
                    assert!(truth.is_empty());
                    assert!(indices.len() <= 4 && oracle_bad(&[&m], &indices));
                }
            }
        }
    }
}

#[test]
fn family_characterization_on_every_01_amonge_matrix_up_to_4() {
    for n in 1usize..=4 {
        for bits in 0..1u32 << (n * n) {
            let m = matrix01(n, bits);
            if !oracle_amonge(&m.rows()) {
                continue;
            }
            let (o, r) = amonge_permutation_family(&m).unwrap();
            let ext: BTreeSet<Vec<usize>> = o
                .linear_extensions()
                .into_iter()
                .chain(r.linear_extensions())
                .map(|c| c.as_slice().to_vec())
                .collect();
            let truth: BTreeSet<Vec<usize>> = oracle_verifying(&m).into_iter().collect();
            assert_eq!(ext, truth, "matrix {:?}", m.rows());
        }
    }
}
