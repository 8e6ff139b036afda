use std::collections::BTreeMap;

use maxcsp_core::{standard, Chain, CoreError, Predicate};
use maxcsp_monge::{decompose_01_amonge, l_matrix, r_matrix, MongeDecomposition, SquareMatrix};

use crate::{ImplConstraint, ImplError, PredRef, StrictImplementation};

fn constraint(pred: PredRef, scope: &[&str]) -> ImplConstraint {
    ImplConstraint { pred, scope: scope.iter().map(|s| s.to_string()).collect() }
}

fn named(name: impl Into<String>) -> PredRef {
    PredRef::Named(name.into())
}

fn bare(target: Predicate, alpha: u32, primary: &[&str]) -> StrictImplementation {
    StrictImplementation {
        target,
        alpha,
        primary: primary.iter().map(|s| s.to_string()).collect(),
        auxiliary: Vec::new(),
        predicates: BTreeMap::new(),
        constraints: Vec::new(),
        source: None,
        formula: None,
        consequence: None,
    }
}

/// `u_{D'}(x) = Σ_{c ∈ D'} u_c(x)`, with α = 1.
pub fn unary_decomposition(sub: &[usize], d: usize) -> Result<StrictImplementation, ImplError> {
    let mut s = sub.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.is_empty() {
        return Err(CoreError::EmptySubset.into());
    }
    let mut si = bare(standard::unary_subset(d, &s)?, 1, &["x"]);
    si.constraints = s.iter().map(|&c| constraint(named(standard::unary_name(&[c])), &["x"])).collect();
    Ok(si)
}

/// Implements the binary slice `f(…, x, …, y, …)` with the listed positions
/// fixed to `constants`: `f'(x,y) + (n−2) = max_Z [f(…) + Σ u_{c_p}(z_p)]`.
///
/// `positions` must name all but two positions; `x` and `y` take the
/// remaining two in order.
pub fn binarize(f: &Predicate, positions: &[usize], constants: &[usize]) -> Result<StrictImplementation, ImplError> {
    let n = f.arity();
    if n < 3 {
        return Err(ImplError::ArityTooSmall(n));
    }
    let slice = f.fix(positions, constants)?;
    if slice.arity() != 2 {
        return Err(CoreError::NotBinary(slice.arity()).into());
    }
    let mut si = bare(slice, (n - 1) as u32, &["x", "y"]);
    si.predicates.insert("f".into(), f.clone());
    let mut free = ["x", "y"].into_iter();
    let mut scope = Vec::with_capacity(n);
    for p in 0..n {
        match positions.iter().position(|&q| q == p) {
            Some(k) => {
                let z = format!("z{p}");
                si.auxiliary.push(z.clone());
                si.constraints.push(ImplConstraint {
                    pred: named(standard::unary_name(&[constants[k]])),
                    scope: vec![z.clone()],
                });
                scope.push(z);
            }
            None => scope.push(free.next().expect("two free positions").to_string()),
        }
    }
    si.constraints.insert(0, ImplConstraint { pred: named("f"), scope });
    Ok(si)
}

/// The two steps that turn an `L(p,q)` predicate on a 4-element domain into
/// `L(p,q) + R(p+1,q+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LrNormalization {
    /// `f'(x,y) + 1 = f(x,y) + u_{p+1..3}(x) + u_{q+1..3}(y)`, α = 2.
    pub r_part: StrictImplementation,
    /// `f''(x,y) = f(x,y) + f'(x,y)`, α = 1.
    pub sum: StrictImplementation,
}

pub fn lr_normalize(f: &Predicate) -> Result<LrNormalization, ImplError> {
    if f.arity() != 2 || f.domain_size() != 4 {
        return Err(ImplError::NotLForm);
    }
    let n = 4;
    let m = SquareMatrix::from_predicate(f)?;
    let MongeDecomposition::L { p, q } = decompose_01_amonge(&m)? else {
        return Err(ImplError::NotLForm);
    };
    let r = r_matrix(n, p + 1, q + 1).to_predicate()?;
    let mut r_part = bare(r.clone(), 2, &["x", "y"]);
    r_part.predicates.insert("f".into(), f.clone());
    r_part.constraints = vec![
        constraint(named("f"), &["x", "y"]),
        constraint(named(standard::unary_name(&((p + 1)..n).collect::<Vec<_>>())), &["x"]),
        constraint(named(standard::unary_name(&((q + 1)..n).collect::<Vec<_>>())), &["y"]),
    ];
    let lr = l_matrix(n, p, q).checked_add(&r_matrix(n, p + 1, q + 1))?.to_predicate()?;
    let mut sum = bare(lr, 1, &["x", "y"]);
    sum.predicates.insert("f".into(), f.clone());
    sum.predicates.insert("f'".into(), r);
    sum.constraints = vec![constraint(named("f"), &["x", "y"]), constraint(named("f'"), &["x", "y"])];
    Ok(LrNormalization { r_part, sum })
}

/// The same identity read through a relabelling of the domain: implements
/// `π(g)`, or `π(g^t)` when `transposed`, from the relabelled (and, for
/// binary constraints, transposed) predicates.
pub fn relabel(si: &StrictImplementation, pi: &Chain, transposed: bool) -> Result<StrictImplementation, ImplError> {
    let flip = |p: Predicate| if transposed && p.arity() == 2 { p.transpose() } else { Ok(p) };
    let tag: String = pi.as_slice().iter().map(|v| v.to_string()).collect();
    if transposed && si.target.arity() != 2 {
        return Err(CoreError::NotBinary(si.target.arity()).into());
    }
    let mut out = bare(flip(si.target.clone())?.permute(pi)?, si.alpha, &[]);
    out.primary = si.primary.clone();
    if transposed {
        out.primary.reverse();
    }
    out.auxiliary = si.auxiliary.clone();
    for c in &si.constraints {
        let p = flip(si.resolve(&c.pred)?)?.permute(pi)?;
        let mut scope = c.scope.clone();
        if transposed && p.arity() == 2 {
            scope.reverse();
        }
        let name = if p.arity() == 1 && !p.satisfying_tuples().is_empty() {
            standard::unary_name(&p.satisfying_tuples().concat())
        } else {
            let base = match &c.pred {
                PredRef::Named(n) => n.clone(),
                PredRef::Inline(_) => "p".into(),
            };
            let name = format!("{base}{}@{tag}", if transposed && p.arity() == 2 { "^t" } else { "" });
            out.predicates.insert(name.clone(), p);
            name
        };
        out.constraints.push(ImplConstraint { pred: named(name), scope });
    }
    out.source = si.source.as_ref().map(|s| format!("{s}@{tag}{}", if transposed { "^t" } else { "" }));
    Ok(out)
}
