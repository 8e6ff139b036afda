//! Digraphs as binary predicates: conversion both ways, List H-coloring
//! optimization instances, and tractability classification of digraphs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use maxcsp_core::{standard, Chain, Constraint, CoreError, Instance, Predicate};
use maxcsp_monge::{find_amonge_permutation, AmongeResult, MongeError, SquareMatrix};
use maxcsp_supermod::{strip_all_ones, StripStep, SupermodError, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HcolorError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Monge(#[from] MongeError),
    #[error(transparent)]
    Supermod(#[from] SupermodError),
    #[error("a digraph needs at least one vertex")]
    NoVertices,
    #[error("arc endpoint {vertex} out of range for {vertices} vertices")]
    VertexOutOfRange { vertex: usize, vertices: usize },
    #[error("digraph documents must set \"directed\": true")]
    NotDirected,
    #[error("vertex {vertex} has scores but an empty list")]
    EmptyList { vertex: usize },
    #[error("vertex {vertex}: list value {value} out of range for {vertices} target vertices")]
    ListValueOutOfRange { vertex: usize, value: usize, vertices: usize },
    #[error("vertex {vertex}: score given for {value}, which is not in its list")]
    ScoreOutsideList { vertex: usize, value: usize },
    #[error("vertex {vertex}: score for {value} must be positive")]
    ZeroScore { vertex: usize, value: usize },
    #[error("{got} arc weights given for {expected} arcs")]
    ArcWeightCount { expected: usize, got: usize },
}

/// Directed graph on `0..vertices`; loops allowed, arcs kept sorted and distinct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DigraphRepr", into = "DigraphRepr")]
pub struct Digraph {
    vertices: usize,
    arcs: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct DigraphRepr {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    directed: bool,
}

impl TryFrom<DigraphRepr> for Digraph {
    type Error = HcolorError;

    fn try_from(r: DigraphRepr) -> Result<Self, HcolorError> {
        if !r.directed {
            return Err(HcolorError::NotDirected);
        }
        Digraph::new(r.vertices, r.edges)
    }
}

impl From<Digraph> for DigraphRepr {
    fn from(g: Digraph) -> Self {
        DigraphRepr { vertices: g.vertices, edges: g.arcs, directed: true }
    }
}

impl Digraph {
    pub fn new(vertices: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, HcolorError> {
        if vertices == 0 {
            return Err(HcolorError::NoVertices);
        }
        let arcs: BTreeSet<(usize, usize)> = arcs.into_iter().collect();
        for &(u, v) in &arcs {
            for vertex in [u, v] {
                if vertex >= vertices {
                    return Err(HcolorError::VertexOutOfRange { vertex, vertices });
                }
            }
        }
        Ok(Digraph { vertices, arcs: arcs.into_iter().collect() })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.binary_search(&(u, v)).is_ok()
    }
}

/// `h(u, v) = 1` iff `(u, v)` is an arc.
pub fn digraph_to_predicate(h: &Digraph) -> Predicate {
    Predicate::from_fn(h.vertices, 2, |t| h.has_arc(t[0], t[1])).expect("non-empty domain")
}

pub fn predicate_to_digraph(h: &Predicate) -> Result<Digraph, HcolorError> {
    if h.arity() != 2 {
        return Err(CoreError::NotBinary(h.arity()).into());
    }
    let d = h.domain_size();
    Digraph::new(d, (0..d).flat_map(|u| (0..d).map(move |v| (u, v))).filter(|&(u, v)| h.at(u, v)))
}

/// Per-vertex lists `L_v ⊆ V_H` and scores `ρ_v: L_v → ℕ⁺`, keyed by vertex of `G`.
///
/// A vertex with scores but no list uses the scored values as its list; a
/// listed value without a score scores 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListSpec {
    #[serde(default, deserialize_with = "keyed::lists")]
    pub lists: BTreeMap<usize, BTreeSet<usize>>,
    #[serde(default, deserialize_with = "keyed::scores")]
    pub scores: BTreeMap<usize, BTreeMap<usize, u64>>,
}

/// Vertex-keyed maps read from JSON object keys, which are always strings.
pub mod keyed {
    use std::collections::{BTreeMap, BTreeSet};

    use serde::de::Error;
    use serde::{Deserialize, Deserializer};

    fn key<E: Error>(k: &str) -> Result<usize, E> {
        k.parse().map_err(|_| E::custom(format!("vertex key {k:?} is not a non-negative integer")))
    }

    pub fn lists<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, BTreeSet<usize>>, D::Error> {
        BTreeMap::<String, BTreeSet<usize>>::deserialize(d)?.into_iter().map(|(k, v)| Ok((key(&k)?, v))).collect()
    }

    pub fn scores<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, BTreeMap<usize, u64>>, D::Error> {
        BTreeMap::<String, BTreeMap<String, u64>>::deserialize(d)?
            .into_iter()
            .map(|(k, v)| Ok((key(&k)?, v.into_iter().map(|(a, w)| Ok((key(&a)?, w))).collect::<Result<_, _>>()?)))
            .collect()
    }
}

impl ListSpec {
    /// Effective score function of each constrained vertex.
    pub fn score_functions(&self, target_vertices: usize) -> Result<BTreeMap<usize, BTreeMap<usize, u64>>, HcolorError> {
        let mut out = BTreeMap::new();
        let vertices: BTreeSet<usize> = self.lists.keys().chain(self.scores.keys()).copied().collect();
        for v in vertices {
            let scores = self.scores.get(&v);
            let list: BTreeSet<usize> = match (self.lists.get(&v), scores) {
                (Some(l), Some(s)) if l.is_empty() && !s.is_empty() => return Err(HcolorError::EmptyList { vertex: v }),
                (Some(l), _) => l.clone(),
                (None, Some(s)) => s.keys().copied().collect(),
                (None, None) => unreachable!(),
            };
            let mut rho = BTreeMap::new();
            for &a in &list {
                if a >= target_vertices {
                    return Err(HcolorError::ListValueOutOfRange { vertex: v, value: a, vertices: target_vertices });
                }
                rho.insert(a, 1);
            }
            for (&a, &w) in scores.into_iter().flatten() {
                if !list.contains(&a) {
                    return Err(HcolorError::ScoreOutsideList { vertex: v, value: a });
                }
                if w == 0 {
                    return Err(HcolorError::ZeroScore { vertex: v, value: a });
                }
                rho.insert(a, w);
            }
            out.insert(v, rho);
        }
        Ok(out)
    }
}

/// `ρ = Σ_j c_j·u_{L_j}` over the superlevel sets `L_1 ⊇ L_2 ⊇ …` of `ρ`,
/// as `(L_j, c_j)` from the largest set down.
pub fn superlevel_decomposition(rho: &BTreeMap<usize, u64>) -> Vec<(Vec<usize>, u64)> {
    let levels: BTreeSet<u64> = rho.values().copied().filter(|&w| w > 0).collect();
    let mut prev = 0;
    let mut out = Vec::new();
    for c in levels {
        let set: Vec<usize> = rho.iter().filter(|(_, &w)| w >= c).map(|(&a, _)| a).collect();
        out.push((set, c - prev));
        prev = c;
    }
    out
}

/// Max CSP instance over `V_H` with variables `v0…` for the vertices of `G`:
/// one `h` constraint per arc of `G` (weighted by `arc_weights`, default 1)
/// and the superlevel decomposition of each score function as `u{…}` constraints.
pub fn build_list_hcoloring_instance(
    g: &Digraph,
    h: &Digraph,
    lists: &ListSpec,
    arc_weights: Option<&[u64]>,
) -> Result<Instance, HcolorError> {
    if let Some(w) = arc_weights {
        if w.len() != g.arcs.len() {
            return Err(HcolorError::ArcWeightCount { expected: g.arcs.len(), got: w.len() });
        }
    }
    let d = h.vertices;
    let mut predicates = BTreeMap::from([("h".to_string(), digraph_to_predicate(h))]);
    let var = |v: usize| format!("v{v}");
    let mut constraints: Vec<Constraint> = g
        .arcs
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| Constraint {
            pred: "h".into(),
            scope: vec![var(u), var(v)],
            weight: arc_weights.map_or(1, |w| w[i]),
        })
        .collect();
    for (v, rho) in lists.score_functions(d)? {
        if v >= g.vertices {
            return Err(HcolorError::VertexOutOfRange { vertex: v, vertices: g.vertices });
        }
        for (set, c) in superlevel_decomposition(&rho) {
            let name = standard::unary_name(&set);
            predicates.entry(name.clone()).or_insert(standard::unary_subset(d, &set)?);
            constraints.push(Constraint { pred: name, scope: vec![var(v)], weight: c });
        }
    }
    Ok(Instance::new(d, predicates, (0..g.vertices).map(var).collect(), constraints)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphClassification {
    pub verdict: Verdict,
    /// Vertex ordering under which the stripped adjacency matrix is a-Monge.
    pub ordering: Option<Chain>,
    /// At most four vertices whose induced stripped matrix has no a-Monge ordering.
    pub witness: Option<Vec<usize>>,
    /// All-ones lines zeroed before recognition.
    pub stripped: Vec<StripStep>,
}

/// Tractable iff the adjacency matrix, after zeroing all-ones lines, is
/// a-Monge under some vertex ordering.
pub fn classify_digraph(h: &Digraph) -> Result<DigraphClassification, HcolorError> {
    let s = strip_all_ones(&digraph_to_predicate(h))?;
    let m = SquareMatrix::from_predicate(&s.predicate)?;
    Ok(match find_amonge_permutation(&m)? {
        AmongeResult::Permutation { permutation } => DigraphClassification {
            verdict: Verdict::Tractable,
            ordering: Some(permutation),
            witness: None,
            stripped: s.log,
        },
        AmongeResult::BadWitness { indices } => DigraphClassification {
            verdict: Verdict::ApxComplete,
            ordering: None,
            witness: Some(indices),
            stripped: s.log,
        },
    })
}
