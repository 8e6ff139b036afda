use std::collections::BTreeMap;

use maxcsp_core::{Constraint, Instance, Predicate};
use maxcsp_solver::*;
use proptest::prelude::*;

/// Random instance over `n` variables with non-trivial predicates and
/// pairwise-distinct scope variables.
fn instance() -> impl Strategy<Value = Instance> {
    (2usize..=3, 1usize..=5).prop_flat_map(|(d, n)| {
        let pred = (1usize..=3.min(n)).prop_flat_map(move |m| {
            prop::collection::vec(any::<bool>(), d.pow(m as u32))
                .prop_filter("non-trivial", |t| t.iter().any(|&b| b))
                .prop_map(move |t| Predicate::new(d, m, t).unwrap())
        });
        let cons = prop::collection::vec((0usize..4, Just((0..n).collect::<Vec<_>>()).prop_shuffle(), 1u64..=3), 0..=8);
        (prop::collection::vec(pred, 4), cons).prop_map(move |(preds, cons)| {
            let predicates: BTreeMap<String, Predicate> =
                preds.iter().enumerate().map(|(i, p)| (format!("p{i}"), p.clone())).collect();
            let constraints = cons
                .into_iter()
                .map(|(pi, vars, w)| Constraint {
                    pred: format!("p{pi}"),
                    scope: vars[..preds[pi].arity()].iter().map(|v| format!("x{v}")).collect(),
                    weight: w,
                })
                .collect();
            Instance::new(d, predicates, (0..n).map(|i| format!("x{i}")).collect(), constraints).unwrap()
        })
    })
}

/// Recursive exhaustion returning the first maximizer in lexicographic order.
fn oracle(inst: &Instance) -> (u64, Vec<usize>) {
    fn go(inst: &Instance, prefix: &mut Vec<usize>, best: &mut Option<(u64, Vec<usize>)>) {
        if prefix.len() == inst.variables().len() {
            let c = inst.evaluate(prefix).unwrap();
            if best.as_ref().is_none_or(|(b, _)| c > *b) {
                *best = Some((c, prefix.clone()));
            }
            return;
        }
        for v in 0..inst.domain_size() {
            prefix.push(v);
            go(inst, prefix, best);
            prefix.pop();
        }
    }
    let mut best = None;
    go(inst, &mut Vec::new(), &mut best);
    best.unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn approximation_meets_the_fraction_bound(i in instance()) {
        let s = approx_solve(&i).unwrap();
        let denom = (i.domain_size() as u64).pow(i.max_arity() as u32);
        prop_assert!(s.cost >= i.total_weight().div_ceil(denom));
        prop_assert_eq!(s.cost, i.evaluate(&s.values).unwrap());
        prop_assert!(s.cost <= brute_force_opt(&i).unwrap().cost);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn brute_force_matches_recursive_oracle(i in instance()) {
        let s = brute_force_opt(&i).unwrap();
        prop_assert_eq!((s.cost, s.values), oracle(&i));
    }

    #[test]
    fn maxkcut_optimum_is_best_colouring(n in 1usize..=5, k in 2usize..=3, raw in prop::collection::vec((0usize..5, 0usize..5), 0..8)) {
        let edges: Vec<(usize, usize)> = raw.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v).collect();
        let g = Graph::new(n, edges.clone()).unwrap();
        let opt = brute_force_opt(&graph_to_maxkcut_instance(&g, k).unwrap()).unwrap().cost;
        let mut best = 0;
        for code in 0..k.pow(n as u32) {
            let colour: Vec<usize> = (0..n).map(|i| code / k.pow(i as u32) % k).collect();
            best = best.max(edges.iter().filter(|(u, v)| colour[*u] != colour[*v]).count() as u64);
        }
        prop_assert_eq!(opt, best);
    }
}
