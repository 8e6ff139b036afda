use crate::{Chain, CoreError, Predicate};

/// Predicates with a fixed meaning that recur throughout the theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardKind {
    /// `u_{D'}(x) = 1` iff `x ∈ D'`.
    UnarySubset(Vec<usize>),
    /// The fixed-value constraint `x = c`.
    FixedValue(usize),
    /// `neq(x, y) = 1` iff `x ≠ y`.
    Neq,
    /// Equality `x = y`.
    Eq,
    /// Generalized 2-monotone predicate: 1 iff `(x,y) ≤ lower` or `(x,y) ≥ upper`
    /// componentwise in `chain`. At least one corner must be present.
    TwoMonotone { lower: Option<(usize, usize)>, upper: Option<(usize, usize)>, chain: Chain },
}

pub fn build_standard_predicate(kind: &StandardKind, domain_size: usize) -> Result<Predicate, CoreError> {
    let check = |v: usize| {
        if v < domain_size {
            Ok(())
        } else {
            Err(CoreError::ValueOutOfRange { value: v, domain_size })
        }
    };
    match kind {
        StandardKind::UnarySubset(sub) => {
            if sub.is_empty() {
                return Err(CoreError::EmptySubset);
            }
            for &v in sub {
                check(v)?;
            }
            Predicate::from_fn(domain_size, 1, |t| sub.contains(&t[0]))
        }
        StandardKind::FixedValue(c) => {
            check(*c)?;
            Predicate::from_fn(domain_size, 1, |t| t[0] == *c)
        }
        StandardKind::Neq => Predicate::from_fn(domain_size, 2, |t| t[0] != t[1]),
        StandardKind::Eq => Predicate::from_fn(domain_size, 2, |t| t[0] == t[1]),
        StandardKind::TwoMonotone { lower, upper, chain } => {
            if chain.len() != domain_size {
                return Err(CoreError::PermutationSize { expected: domain_size, got: chain.len() });
            }
            if lower.is_none() && upper.is_none() {
                return Err(CoreError::NoCorner);
            }
            for corner in lower.iter().chain(upper.iter()) {
                if corner.0 >= domain_size || corner.1 >= domain_size {
                    return Err(CoreError::BadCorner(*corner));
                }
            }
            let rank = chain.ranks();
            Predicate::from_fn(domain_size, 2, |t| {
                let (x, y) = (rank[t[0]], rank[t[1]]);
                let below = lower.is_some_and(|(a1, a2)| x <= rank[a1] && y <= rank[a2]);
                let above = upper.is_some_and(|(b1, b2)| x >= rank[b1] && y >= rank[b2]);
                below || above
            })
        }
    }
}

pub fn unary_subset(domain_size: usize, sub: &[usize]) -> Result<Predicate, CoreError> {
    build_standard_predicate(&StandardKind::UnarySubset(sub.to_vec()), domain_size)
}

pub fn fixed_value(domain_size: usize, c: usize) -> Result<Predicate, CoreError> {
    build_standard_predicate(&StandardKind::FixedValue(c), domain_size)
}

pub fn neq(domain_size: usize) -> Predicate {
    build_standard_predicate(&StandardKind::Neq, domain_size).expect("neq is always valid")
}

/// Conventional name of a unary subset predicate, e.g. `u{0,3}`.
pub fn unary_name(sub: &[usize]) -> String {
    let mut s = sub.to_vec();
    s.sort_unstable();
    s.dedup();
    let inner: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    format!("u{{{}}}", inner.join(","))
}

/// Parses a name of the form `u{0,3}` back into its subset.
pub fn parse_unary_name(name: &str) -> Option<Vec<usize>> {
    let inner = name.strip_prefix("u{")?.strip_suffix('}')?;
    if inner.trim().is_empty() {
        return None;
    }
    inner.split(',').map(|s| s.trim().parse().ok()).collect()
}
