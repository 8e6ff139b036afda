use std::collections::BTreeMap;
use std::time::Instant;

use maxcsp_core::{format, standard, Constraint, Instance, Predicate};
use maxcsp_impls::*;
use maxcsp_solver::brute_force_opt;
use proptest::prelude::*;

fn opt(i: &Instance) -> u64 {
    brute_force_opt(i).unwrap().cost
}

#[test]
fn whole_catalog_verifies_with_consequences() {
    let start = Instant::now();
    let report = verify_catalog().unwrap();
    assert_eq!(report.total, 58);
    for item in &report.items {
        assert!(item.verified, "{} does not verify", item.source);
        assert!(item.consequence_holds, "{}: {}", item.source, item.detail);
    }
    assert!(report.all_ok());
    assert!(start.elapsed().as_secs() < 5);
}

#[test]
fn catalog_items_are_small_enough_to_exhaust() {
    for si in appendix_catalog() {
        assert!(si.primary.len() + si.auxiliary.len() <= 4, "{:?}", si.source);
        assert_eq!(si.domain_size(), 4);
    }
}

#[test]
fn catalog_files_round_trip() {
    for si in appendix_catalog() {
        let text = format::render(si);
        let back: StrictImplementation = format::parse(&text).unwrap();
        assert_eq!(&back, si);
    }
    let v: serde_json::Value = serde_json::from_str(&format::render(catalog_entry("C#1").unwrap())).unwrap();
    assert_eq!(v["format"], 1);
    assert_eq!(v["consequence"]["kind"], "bad_restriction");
}

#[test]
fn missing_format_is_rejected() {
    let text = r#"{"target": {"domain_size": 2, "arity": 1, "table": "10"}, "alpha": 1, "primary": ["x"], "constraints": [{"pred": "u{0}", "scope": ["x"]}]}"#;
    assert!(format::parse::<StrictImplementation>(text).is_err());
    let ok = format!(r#"{{"format": 1, {}"#, &text[1..]);
    let si: StrictImplementation = format::parse(&ok).unwrap();
    assert!(verify_strict_implementation(&si).unwrap().verified);
}

/// Replaces every constraint on predicate `name` by `inner`'s constraints,
/// renaming its auxiliaries per use; the slack adds up.
fn substitute(outer: &StrictImplementation, name: &str, inner: &StrictImplementation) -> StrictImplementation {
    let mut out = outer.clone();
    out.constraints.clear();
    let mut uses = 0;
    for c in &outer.constraints {
        if c.pred != PredRef::Named(name.to_string()) {
            out.constraints.push(c.clone());
            continue;
        }
        uses += 1;
        let mut rename: BTreeMap<String, String> = inner.primary.iter().cloned().zip(c.scope.iter().cloned()).collect();
        for z in &inner.auxiliary {
            let fresh = format!("{z}_{name}_{uses}");
            out.auxiliary.push(fresh.clone());
            rename.insert(z.clone(), fresh);
        }
        for ic in &inner.constraints {
            let pred = match &ic.pred {
                PredRef::Named(n) => PredRef::Inline(inner.resolve_name(n).unwrap()),
                p => p.clone(),
            };
            out.constraints.push(ImplConstraint { pred, scope: ic.scope.iter().map(|v| rename[v].clone()).collect() });
        }
    }
    out.alpha += uses * (inner.alpha - 1);
    out
}

#[test]
fn binarize_chains_with_unary_decomposition() {
    let f = Predicate::from_fn(3, 4, |t| t[0] <= t[1] || t[2] == t[3]).unwrap();
    let bin = binarize(&f, &[1, 3], &[2, 0]).unwrap();
    let mut chained = bin.clone();
    for c in [0, 2] {
        chained = substitute(&chained, &standard::unary_name(&[c]), &unary_decomposition(&[c], 3).unwrap());
    }
    assert!(verify_strict_implementation(&chained).unwrap().verified);
    // L-form step uses `u_{D'}` constraints; expand them into fixed values.
    let lr = lr_normalize(&Predicate::from_rows("1000/1000/0000/0000").unwrap()).unwrap();
    let mut r = lr.r_part.clone();
    for sub in [vec![1, 2, 3], vec![2, 3]] {
        r = substitute(&r, &standard::unary_name(&sub), &unary_decomposition(&sub, 4).unwrap());
    }
    assert!(r.constraints.iter().skip(1).all(|c| c.scope.len() == 1));
    assert!(verify_strict_implementation(&r).unwrap().verified);
    let sum = substitute(&lr.sum, "f'", &lr.r_part);
    assert_eq!(sum.alpha, 2);
    assert!(verify_strict_implementation(&sum).unwrap().verified);
}

#[test]
fn one_replaced_constraint_raises_opt_by_one() {
    let si = catalog_entry("B#1").unwrap();
    let inst = Instance::new(
        4,
        [("g".to_string(), si.target.clone())].into(),
        vec!["a".into(), "b".into()],
        vec![Constraint { pred: "g".into(), scope: vec!["a".into(), "b".into()], weight: 1 }],
    )
    .unwrap();
    let applied = apply_implementation_to_instance(&inst, "g", si).unwrap();
    assert_eq!(si.alpha, 2);
    assert_eq!(opt(&applied.instance), opt(&inst) + 1);
}

#[test]
fn restriction_with_two_variables() {
    let inst = Instance::new(
        2,
        [("n".to_string(), standard::neq(2))].into(),
        vec!["a".into(), "b".into()],
        vec![Constraint { pred: "n".into(), scope: vec!["a".into(), "b".into()], weight: 1 }],
    )
    .unwrap();
    let lifts = [("n".to_string(), standard::neq(4))].into();
    let lifted = restrict_domain_instance(&inst, &[0, 2], 4, &lifts, 1).unwrap();
    assert_eq!(opt(&lifted), opt(&inst) + 2);
    let full = restrict_domain_instance(&inst, &[0, 1], 2, &[("n".to_string(), standard::neq(2))].into(), 3).unwrap();
    assert_eq!(opt(&full), opt(&inst) + 6);
}

#[test]
fn search_finds_decomposition_for_every_unary_subset() {
    let lang = maxcsp_core::ConstraintLanguage::new(4, BTreeMap::new(), true).unwrap();
    for mask in 1u32..16 {
        let sub: Vec<usize> = (0..4).filter(|b| mask >> b & 1 == 1).collect();
        let target = standard::unary_subset(4, &sub).unwrap();
        let si = search_strict_implementation(&lang, &target, SearchBounds::default()).unwrap();
        assert_eq!(si.alpha, 1);
        assert_eq!(si.constraints.len(), sub.len());
        assert!(verify_strict_implementation(&si).unwrap().verified);
    }
}

fn table(d: usize, m: usize) -> impl Strategy<Value = Predicate> {
    prop::collection::vec(any::<bool>(), d.pow(m as u32)).prop_map(move |t| Predicate::new(d, m, t).unwrap())
}

/// Random constraints `(predicate index, scope, weight)` over `n` variables.
fn constraints(preds: usize, n: usize, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<(usize, Vec<usize>, u64)>> {
    prop::collection::vec((0..preds, prop::collection::vec(0..n, 2), 1u64..=2), len)
}

fn build(d: usize, preds: &[(&str, Predicate)], n: usize, cs: &[(usize, Vec<usize>, u64)]) -> Instance {
    Instance::new(
        d,
        preds.iter().map(|(k, p)| (k.to_string(), p.clone())).collect(),
        (0..n).map(|i| format!("v{i}")).collect(),
        cs.iter()
            .map(|(p, s, w)| Constraint {
                pred: preds[*p].0.to_string(),
                scope: s.iter().map(|v| format!("v{v}")).collect(),
                weight: *w,
            })
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn catalog_replacement_shifts_opt(
        item in 0usize..58,
        other in table(4, 2),
        n in 2usize..=3,
        cs in constraints(2, 3, 1..4),
    ) {
        let si = &appendix_catalog()[item];
        let cs: Vec<_> = cs.into_iter().map(|(p, s, w)| (p, s.into_iter().map(|v| v % n).collect(), w)).collect();
        let copies: u64 = cs.iter().filter(|c| c.0 == 0).map(|c| c.2).sum();
        prop_assume!(n as u64 + copies * si.auxiliary.len() as u64 <= 7);
        let inst = build(4, &[("g", si.target.clone()), ("o", other)], n, &cs);
        let applied = apply_implementation_to_instance(&inst, "g", si).unwrap();
        prop_assert_eq!(applied.replaced_copies, copies);
        prop_assert_eq!(opt(&applied.instance), opt(&inst) + (si.alpha as u64 - 1) * copies);
    }

    #[test]
    fn binarized_replacement_shifts_opt(
        f in table(3, 3),
        pos in 0usize..3,
        c in 0usize..3,
        other in table(3, 2),
        cs in constraints(2, 3, 1..4),
    ) {
        let si = binarize(&f, &[pos], &[c]).unwrap();
        prop_assert_eq!(si.alpha, 2);
        prop_assert!(verify_strict_implementation(&si).unwrap().verified);
        let inst = build(3, &[("g", si.target.clone()), ("o", other)], 3, &cs);
        let copies: u64 = cs.iter().filter(|c| c.0 == 0).map(|c| c.2).sum();
        let applied = apply_implementation_to_instance(&inst, "g", &si).unwrap();
        prop_assert_eq!(opt(&applied.instance), opt(&inst) + copies);
    }

    #[test]
    fn domain_restriction_shifts_opt(
        mask in 1u32..16,
        lift_a in table(4, 2),
        lift_b in table(4, 2),
        n in 2usize..=4,
        extra in constraints(2, 4, 0..3),
        slack in 0u64..2,
    ) {
        let sub: Vec<usize> = (0..4).filter(|b| mask >> b & 1 == 1).collect();
        let d2 = sub.len();
        // Restrict the random lifts to get the instance predicates.
        let a = lift_a.restrict(&sub).unwrap().predicate;
        let b = lift_b.restrict(&sub).unwrap().predicate;
        let mut cs: Vec<(usize, Vec<usize>, u64)> = (0..n).map(|i| (i % 2, vec![i, (i + 1) % n], 1)).collect();
        cs.extend(extra.into_iter().map(|(p, s, w)| (p, s.into_iter().map(|v| v % n).collect(), w)));
        let inst = build(d2, &[("a", a), ("b", b)], n, &cs);
        let k = inst.occurrences().into_iter().max().unwrap() + slack;
        let lifts = [("a".to_string(), lift_a), ("b".to_string(), lift_b)].into();
        let lifted = restrict_domain_instance(&inst, &sub, 4, &lifts, k).unwrap();
        prop_assert_eq!(opt(&lifted), opt(&inst) + k * n as u64);
    }

    #[test]
    fn arity_four_slices_verify(f in table(3, 4), c in prop::collection::vec(0usize..3, 2), which in 0usize..6) {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let (i, j) = pairs[which];
        let positions: Vec<usize> = (0..4).filter(|&p| p != i && p != j).collect();
        let si = binarize(&f, &positions, &c).unwrap();
        prop_assert_eq!(si.alpha, 3);
        prop_assert_eq!(&si.target, &f.fix(&positions, &c).unwrap());
        prop_assert!(verify_strict_implementation(&si).unwrap().verified);
    }
}
