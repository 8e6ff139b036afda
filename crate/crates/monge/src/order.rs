use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use maxcsp_core::Chain;

use crate::check::{anti_monge_violation, both_equivalent, delta_raw, CheckMethod};
use crate::{MongeError, SquareMatrix};

/// Ordered disjoint classes `D_1, …, D_t` covering `0..n`.
///
/// `a ⪯ b` iff `a = b` or the class of `a` comes strictly before that of `b`.
/// A single class (`t = 1`) is allowed and reported as degenerate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct MultipartiteOrder {
    classes: Vec<Vec<usize>>,
    rank: Vec<usize>,
}

impl TryFrom<Vec<Vec<usize>>> for MultipartiteOrder {
    type Error = MongeError;

    fn try_from(classes: Vec<Vec<usize>>) -> Result<Self, MongeError> {
        MultipartiteOrder::new(classes)
    }
}

impl From<MultipartiteOrder> for Vec<Vec<usize>> {
    fn from(o: MultipartiteOrder) -> Self {
        o.classes
    }
}

impl MultipartiteOrder {
    pub fn new(classes: Vec<Vec<usize>>) -> Result<Self, MongeError> {
        let n: usize = classes.iter().map(Vec::len).sum();
        let mut rank = vec![usize::MAX; n];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(MongeError::InvalidOrder(format!("class {c} is empty")));
            }
            for &x in class {
                if x >= n || rank[x] != usize::MAX {
                    return Err(MongeError::InvalidOrder(format!("element {x} is repeated or out of range")));
                }
                rank[x] = c;
            }
        }
        if n == 0 {
            return Err(MongeError::InvalidOrder("no elements".into()));
        }
        Ok(MultipartiteOrder { classes, rank })
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.classes.len() == 1
    }

    /// Strict precedence `a ≺ b`.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b]
    }

    pub fn reverse(&self) -> MultipartiteOrder {
        let classes: Vec<_> = self.classes.iter().rev().cloned().collect();
        MultipartiteOrder::new(classes).expect("reversal keeps the partition")
    }

    /// All strict pairs `(a, b)` with `a ≺ b`, in lexicographic order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| self.precedes(a, b)).collect()
    }

    /// Linear extensions: each class in any internal order, classes in sequence.
    pub fn linear_extensions(&self) -> Vec<Chain> {
        let mut out: Vec<Vec<usize>> = vec![Vec::new()];
        for class in &self.classes {
            let perms = Chain::all(class.len());
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    perms.iter().map(move |p| {
                        let mut v = prefix.clone();
                        v.extend(p.as_slice().iter().map(|&i| class[i]));
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(|v| Chain::new(v).expect("extension is a permutation")).collect()
    }
}

/// The two mutually reverse orders whose linear extensions are the a-Monge
/// permutations of `m`: classes are runs of row- and column-equivalent
/// indices, in their current positions.
pub fn amonge_permutation_family(m: &SquareMatrix) -> Result<(MultipartiteOrder, MultipartiteOrder), MongeError> {
    if let Some(q) = anti_monge_violation(m, CheckMethod::Adjacent) {
        return Err(MongeError::NotAntiMonge(q));
    }
    let n = m.size();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        match classes.iter_mut().find(|c| both_equivalent(m, c[0], x)) {
            Some(c) => c.push(x),
            None => classes.push(vec![x]),
        }
    }
    let order = MultipartiteOrder::new(classes)?;
    let rev = order.reverse();
    Ok((order, rev))
}

/// Why an arc is present.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArcOrigin {
    Assumed,
    /// Forced by the sign of `Δ(i, j, k, l)` together with an earlier arc.
    Delta { i: usize, j: usize, k: usize, l: usize },
    /// Contributed by the order with this index.
    Order { index: usize },
}

/// Directed graph over `0..n`; each arc remembers its first origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecedenceGraph {
    pub size: usize,
    pub arcs: BTreeMap<(usize, usize), ArcOrigin>,
}

impl PrecedenceGraph {
    pub fn new(size: usize) -> Self {
        PrecedenceGraph { size, arcs: BTreeMap::new() }
    }

    /// Adds `a → b` unless present; returns whether it was new.
    pub fn add(&mut self, a: usize, b: usize, origin: ArcOrigin) -> bool {
        assert!(a != b && a < self.size && b < self.size, "arc ({a},{b}) invalid for size {}", self.size);
        if self.arcs.contains_key(&(a, b)) {
            return false;
        }
        self.arcs.insert((a, b), origin);
        true
    }

    pub fn has(&self, a: usize, b: usize) -> bool {
        self.arcs.contains_key(&(a, b))
    }

    /// Some directed cycle, as a vertex sequence, if one exists.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.size];
        for &(a, b) in self.arcs.keys() {
            succ[a].push(b);
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.size];
        let mut stack: Vec<usize> = Vec::new();
        fn dfs(v: usize, succ: &[Vec<usize>], state: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
            state[v] = 1;
            stack.push(v);
            for &w in &succ[v] {
                if state[w] == 1 {
                    let at = stack.iter().position(|&x| x == w).expect("on stack");
                    return Some(stack[at..].to_vec());
                }
                if state[w] == 0 {
                    if let Some(c) = dfs(w, succ, state, stack) {
                        return Some(c);
                    }
                }
            }
            stack.pop();
            state[v] = 2;
            None
        }
        (0..self.size).find_map(|v| if state[v] == 0 { dfs(v, &succ, &mut state, &mut stack) } else { None })
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum MergeResult {
    Acyclic { graph: PrecedenceGraph },
    /// `(a, b)` is an arc of order `first` and `(b, a)` an arc of order `second`.
    Conflict { a: usize, b: usize, first: usize, second: usize },
}

/// Union of the orders' precedence digraphs, or a two-cycle between two of them.
pub fn merge_orders(orders: &[MultipartiteOrder]) -> Result<MergeResult, MongeError> {
    let n = orders.first().map(MultipartiteOrder::len).ok_or(MongeError::EmptyFamily)?;
    if let Some(o) = orders.iter().find(|o| o.len() != n) {
        return Err(MongeError::SizeMismatch { expected: n, got: o.len() });
    }
    let mut graph = PrecedenceGraph::new(n);
    for (index, o) in orders.iter().enumerate() {
        for (a, b) in o.arcs() {
            graph.add(a, b, ArcOrigin::Order { index });
        }
    }
    let conflict = graph.arcs.iter().find_map(|(&(a, b), origin)| {
        let back = graph.arcs.get(&(b, a))?;
        match (origin, back) {
            (ArcOrigin::Order { index: first }, ArcOrigin::Order { index: second }) if a < b => {
                Some(MergeResult::Conflict { a, b, first: *first, second: *second })
            }
            _ => None,
        }
    });
    if let Some(c) = conflict {
        return Ok(c);
    }
    if let Some(cycle) = graph.find_cycle() {
        return Err(MongeError::CycleWithoutTwoCycle(cycle));
    }
    Ok(MergeResult::Acyclic { graph })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ComResult {
    /// Every consequence of the assumption, with no cycle.
    Consistent { graph: PrecedenceGraph },
    /// The consequences contain this cycle, so no a-Monge permutation puts `i` before `j`.
    Refuted { graph: PrecedenceGraph, cycle: Vec<usize> },
}

/// Propagates the assumption `i ≺ j` through Δ-signs.
///
/// With `a ≺ b` known, `Δ(a,b,k,l) > 0` forces `k ≺ l` and `< 0` forces
/// `l ≺ k`; the column sums `Δ(k,l,a,b)` act the same way.
pub fn com_propagate(m: &SquareMatrix, i: usize, j: usize) -> Result<ComResult, MongeError> {
    let n = m.size();
    if let Some(&index) = [i, j].iter().find(|&&x| x >= n) {
        return Err(MongeError::IndexOutOfRange { index, size: n });
    }
    if i == j {
        return Err(MongeError::SameLine);
    }
    let mut graph = PrecedenceGraph::new(n);
    graph.add(i, j, ArcOrigin::Assumed);
    let mut queue = VecDeque::from([(i, j)]);
    let mut seen = BTreeSet::from([(i, j)]);
    while let Some((a, b)) = queue.pop_front() {
        for k in 0..n {
            for l in k + 1..n {
                let forced = [(delta_raw(m, a, b, k, l), (a, b, k, l)), (delta_raw(m, k, l, a, b), (k, l, a, b))];
                for (d, (qi, qj, qk, ql)) in forced {
                    let arc = match d.signum() {
                        1 => (k, l),
                        -1 => (l, k),
                        _ => continue,
                    };
                    if seen.insert(arc) {
                        graph.add(arc.0, arc.1, ArcOrigin::Delta { i: qi, j: qj, k: qk, l: ql });
                        queue.push_back(arc);
                    }
                }
            }
        }
    }
    Ok(match graph.find_cycle() {
        Some(cycle) => ComResult::Refuted { graph, cycle },
        None => ComResult::Consistent { graph },
    })
}
