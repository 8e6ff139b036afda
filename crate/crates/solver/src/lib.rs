//! Solvers for weighted Max CSP instances: an exhaustive oracle, the
//! derandomized `W/d^a` approximation, occurrence statistics, and Max k-Cut
//! instances from graphs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use maxcsp_core::{standard, Assignment, Constraint, CoreError, Instance, Predicate};

/// Default cap on the number of assignments the exhaustive solver visits.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{domain_size}^{variables} assignments exceed the budget of {budget}")]
    BudgetExceeded { domain_size: usize, variables: usize, budget: u64 },
    #[error("edge ({0},{0}) is a self-loop")]
    SelfLoop(usize),
    #[error("edge endpoint {vertex} out of range for {vertices} vertices")]
    VertexOutOfRange { vertex: usize, vertices: usize },
    #[error("k must be at least 2, got {0}")]
    TooFewColours(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub assignment: Assignment,
    /// Values in the instance's variable order.
    pub values: Vec<usize>,
    pub cost: u64,
}

impl Solution {
    fn new(inst: &Instance, values: Vec<usize>, cost: u64) -> Result<Self, SolverError> {
        Ok(Solution { assignment: Assignment::from_values(inst, &values)?, values, cost })
    }
}

/// Constraints with resolved predicate references.
struct Compiled<'a> {
    items: Vec<(&'a Predicate, &'a [usize], u64)>,
}

impl<'a> Compiled<'a> {
    fn new(inst: &'a Instance) -> Self {
        let items = inst
            .compiled()
            .iter()
            .map(|c| (&inst.predicates()[&c.pred], c.scope.as_slice(), c.weight))
            .collect();
        Compiled { items }
    }

    fn cost(&self, values: &[usize], buf: &mut Vec<usize>) -> u64 {
        let mut total = 0;
        for &(p, scope, w) in &self.items {
            buf.clear();
            buf.extend(scope.iter().map(|&v| values[v]));
            if p.get(buf) {
                total += w;
            }
        }
        total
    }
}

/// Exact optimum by exhaustion; the lexicographically least maximizer is returned.
pub fn brute_force_opt(inst: &Instance) -> Result<Solution, SolverError> {
    brute_force_opt_with_budget(inst, DEFAULT_BUDGET)
}

pub fn brute_force_opt_with_budget(inst: &Instance, budget: u64) -> Result<Solution, SolverError> {
    let (d, n) = (inst.domain_size(), inst.variables().len());
    let over = || SolverError::BudgetExceeded { domain_size: d, variables: n, budget };
    let total = (d as u64).checked_pow(n as u32).ok_or_else(over)?;
    if total > budget {
        return Err(over());
    }
    let compiled = Compiled::new(inst);
    let mut values = vec![0; n];
    let mut buf = Vec::new();
    let mut best = (compiled.cost(&values, &mut buf), values.clone());
    for _ in 1..total {
        // Odometer step, last variable fastest.
        for slot in values.iter_mut().rev() {
            *slot += 1;
            if *slot < d {
                break;
            }
            *slot = 0;
        }
        let c = compiled.cost(&values, &mut buf);
        if c > best.0 {
            best = (c, values.clone());
        }
    }
    Solution::new(inst, best.1, best.0)
}

/// Greedy method of conditional expectations.
///
/// Variables are fixed in instance order; each takes the lowest value that
/// maximizes the expected satisfied weight when the unfixed variables are
/// uniform. Expectations are kept as exact integers scaled by `d^A`, where
/// `A` bounds the number of distinct variables in a scope. The final cost is
/// at least the starting expectation, which is `≥ W/d^a` when every scope
/// has distinct variables and every predicate is satisfiable.
pub fn approx_solve(inst: &Instance) -> Result<Solution, SolverError> {
    let (d, n) = (inst.domain_size(), inst.variables().len());
    let compiled = Compiled::new(inst);
    let scopes: Vec<Vec<usize>> = compiled
        .items
        .iter()
        .map(|(_, s, _)| {
            let mut v = s.to_vec();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let width = scopes.iter().map(Vec::len).max().unwrap_or(0);
    let mut touching = vec![Vec::new(); n];
    for (ci, s) in scopes.iter().enumerate() {
        for &v in s {
            touching[v].push(ci);
        }
    }
    let mut fixed: Vec<Option<usize>> = vec![None; n];
    let scaled = |ci: usize, fixed: &[Option<usize>]| -> u128 {
        let (p, scope, w) = compiled.items[ci];
        let free: Vec<usize> = scopes[ci].iter().copied().filter(|&v| fixed[v].is_none()).collect();
        let mut local: BTreeMap<usize, usize> = BTreeMap::new();
        let mut count: u128 = 0;
        let mut tuple = vec![0; scope.len()];
        for code in 0..d.pow(free.len() as u32) {
            let mut c = code;
            for &v in free.iter().rev() {
                local.insert(v, c % d);
                c /= d;
            }
            for (slot, &v) in tuple.iter_mut().zip(scope) {
                *slot = fixed[v].unwrap_or_else(|| local[&v]);
            }
            count += p.get(&tuple) as u128;
        }
        w as u128 * count * (d as u128).pow((width - free.len()) as u32)
    };
    for x in 0..n {
        let mut best: Option<(u128, usize)> = None;
        for v in 0..d {
            fixed[x] = Some(v);
            let gain: u128 = touching[x].iter().map(|&ci| scaled(ci, &fixed)).sum();
            if best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, v));
            }
        }
        fixed[x] = best.map(|(_, v)| v);
    }
    let values: Vec<usize> = fixed.into_iter().map(|v| v.unwrap_or(0)).collect();
    let cost = compiled.cost(&values, &mut Vec::new());
    Solution::new(inst, values, cost)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccurrenceStats {
    pub counts: BTreeMap<String, u64>,
    pub max: u64,
}

/// Per-variable occurrences: `t` appearances in a constraint of weight `s` count `t·s`.
pub fn occurrence_stats(inst: &Instance) -> OccurrenceStats {
    let occ = inst.occurrences();
    let counts: BTreeMap<String, u64> = inst.variables().iter().cloned().zip(occ.iter().copied()).collect();
    OccurrenceStats { max: occ.into_iter().max().unwrap_or(0), counts }
}

/// Undirected multigraph `{"vertices": n, "edges": [[u, v], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = SolverError;

    fn try_from(r: GraphRepr) -> Result<Self, SolverError> {
        Graph::new(r.vertices, r.edges)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr { vertices: g.vertices, edges: g.edges }
    }
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, SolverError> {
        for &(u, v) in &edges {
            for vertex in [u, v] {
                if vertex >= vertices {
                    return Err(SolverError::VertexOutOfRange { vertex, vertices });
                }
            }
        }
        Ok(Graph { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Variables `v0…v{n−1}` and one `neq` constraint per edge over domain `0..k`.
pub fn graph_to_maxkcut_instance(g: &Graph, k: usize) -> Result<Instance, SolverError> {
    if k < 2 {
        return Err(SolverError::TooFewColours(k));
    }
    if let Some(&(u, _)) = g.edges.iter().find(|(u, v)| u == v) {
        return Err(SolverError::SelfLoop(u));
    }
    let predicates = BTreeMap::from([("neq".to_string(), standard::neq(k))]);
    let variables = (0..g.vertices).map(|i| format!("v{i}")).collect();
    let constraints = g
        .edges
        .iter()
        .map(|&(u, v)| Constraint { pred: "neq".into(), scope: vec![format!("v{u}"), format!("v{v}")], weight: 1 })
        .collect();
    Ok(Instance::new(k, predicates, variables, constraints)?)
}
