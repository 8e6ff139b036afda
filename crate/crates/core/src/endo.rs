use crate::{ConstraintLanguage, CoreError, Predicate};

/// Largest domain for which the `d^d` unary maps are enumerated.
pub const DEFAULT_ENDOMORPHISM_BOUND: usize = 6;

fn preserves(f: &Predicate, sat: &[Vec<usize>], map: &[usize], tuple: &mut [usize]) -> bool {
    sat.iter().all(|t| {
        for (slot, &a) in tuple.iter_mut().zip(t) {
            *slot = map[a];
        }
        f.get(tuple)
    })
}

/// Every unary map `μ` with `f(a) = 1 ⇒ f(μ(a)) = 1` for all members `f`,
/// in lexicographic order of the map `[μ(0),…,μ(d−1)]`.
///
/// Fixed-value predicates, when the language includes them, force `μ(c) = c`.
pub fn endomorphisms(lang: &ConstraintLanguage, bound: usize) -> Result<Vec<Vec<usize>>, CoreError> {
    let d = lang.domain_size();
    if d > bound {
        return Err(CoreError::SizeBound { domain_size: d, bound });
    }
    let members: Vec<(&Predicate, Vec<Vec<usize>>)> =
        lang.predicates().values().map(|p| (p, p.satisfying_tuples())).collect();
    let mut out = Vec::new();
    let mut map = vec![0; d];
    let total = d.pow(d as u32);
    'maps: for code in 0..total {
        crate::predicate::decode_into(code, d, &mut map);
        if lang.include_fixed_values() && map.iter().enumerate().any(|(i, &v)| i != v) {
            continue;
        }
        for (p, sat) in &members {
            let mut buf = vec![0; p.arity()];
            if !preserves(p, sat, &map, &mut buf) {
                continue 'maps;
            }
        }
        out.push(map.clone());
    }
    Ok(out)
}

/// A core: the restriction of the language to the image of an endomorphism
/// with the fewest distinct values (ties broken by the least map).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Core {
    pub endomorphism: Vec<usize>,
    pub sub_domain: Vec<usize>,
    pub language: ConstraintLanguage,
}

pub fn core_of(lang: &ConstraintLanguage, bound: usize) -> Result<Core, CoreError> {
    let endos = endomorphisms(lang, bound)?;
    let image = |m: &Vec<usize>| {
        let mut s = m.clone();
        s.sort_unstable();
        s.dedup();
        s
    };
    let best = endos
        .iter()
        .min_by_key(|m| image(m).len())
        .expect("identity is always an endomorphism");
    let sub_domain = image(best);
    let language = lang.restrict(&sub_domain)?;
    Ok(Core { endomorphism: best.clone(), sub_domain, language })
}
