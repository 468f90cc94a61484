//! Constructing a realization of a feasible instance.
//!
//! Two constructions are provided. [`simple_realize`] places the required
//! number of edges for every class pair and then repairs degrees inside each
//! class by shifting neighbors from over-full to under-full vertices.
//!
//! [`balanced_realize`] grows the graph one edge at a time. Before and after
//! every step the degrees inside each class differ by at most one (the
//! *balanced degree invariant*), no class pair ever exceeds its quota, and
//! every edge that a step deletes has its endpoints reconnected by the edges
//! that same step adds, so the number of connected components never goes up.
//! Starting it from a balanced spanning tree therefore yields a connected
//! realization.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result, Violation};
use crate::graph::LabeledGraph;
use crate::instance::{ensure_feasible, within_capacity, ClassLayout, JdmInstance};
use crate::summary::extract_jdm;

/// Realizes `inst` by arbitrary placement followed by degree repair.
///
/// Within-class edges are placed first in lexicographic vertex-pair order,
/// then cross-class edges class pair by class pair, each in lexicographic
/// order. The repair loop then picks the smallest under-full vertex `u` and
/// the smallest over-full vertex `v` of a class and moves
/// `min(d - deg(u), deg(v) - d)` neighbors of `v` that are not neighbors of
/// `u` over to `u`.
pub fn simple_realize(inst: &JdmInstance) -> Result<LabeledGraph> {
    ensure_feasible(inst)?;
    let layout = inst.layout().clone();
    let k = inst.class_count();
    let mut g = LabeledGraph::empty(layout.clone());

    for i in 0..k {
        let members = layout.members(i);
        let pairs = members
            .clone()
            .flat_map(|u| (u + 1..members.end).map(move |v| (u, v)));
        for (u, v) in pairs.take(inst.entry(i, i)) {
            g.insert_edge(u, v);
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            let targets = layout.members(j);
            let pairs = layout
                .members(i)
                .flat_map(|u| targets.clone().map(move |v| (u, v)));
            for (u, v) in pairs.take(inst.entry(i, j)) {
                g.insert_edge(u, v);
            }
        }
    }

    for class in 0..k {
        let want = inst.degree(class);
        loop {
            let members = layout.members(class);
            let under = members.clone().find(|&w| g.degree(w) < want);
            let over = members.clone().find(|&w| g.degree(w) > want);
            let (u, v) = match (under, over) {
                (None, None) => break,
                (Some(u), Some(v)) => (u, v),
                _ => {
                    return Err(Error::Internal(format!(
                        "class {class} has degrees on one side of its target only"
                    )))
                }
            };
            let moves = (want - g.degree(u)).min(g.degree(v) - want);
            let movable: Vec<usize> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&x| x != u && !g.has_edge(u, x))
                .take(moves)
                .collect();
            if movable.len() < moves {
                return Err(Error::Internal(format!(
                    "vertex {v} has too few neighbors to hand over to {u}"
                )));
            }
            for x in movable {
                g.remove_edge(v, x);
                g.insert_edge(u, x);
            }
        }
    }
    Ok(g)
}

/// Which rewiring rule one balanced step applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BalancedCase {
    /// `u in N_i, v in N_j`: add `uv`.
    A1,
    /// `u in N_i, v in M_j`: shift one edge off `v` to a minimum vertex of `V_j`, add `uv`.
    A2,
    /// `u in M_i, v in N_j`: mirror image of `A2`.
    A2Mirror,
    /// `u in M_i, v in M_j`: shift one edge off each of `u` and `v`, add `uv`.
    A3,
    /// `u, v in N_i`: add `uv`.
    B1,
    /// `u in N_i, v in M_i`, `|N_i| = 1`: add `uv`.
    B2Single,
    /// `u in N_i, v in M_i`, `|N_i| > 1`: shift one edge off `v`, add `uv`.
    B2,
    /// `u, v in M_i`, `|N_i| = 1`: shift one edge off `u`, add `uv`.
    B3Single,
    /// `u, v in M_i`, `|N_i| > 1`: shift one edge off each of `u` and `v`, add `uv`.
    B3,
}

impl fmt::Display for BalancedCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BalancedCase::A1 => "A1",
            BalancedCase::A2 => "A2",
            BalancedCase::A2Mirror => "A2'",
            BalancedCase::A3 => "A3",
            BalancedCase::B1 => "B1",
            BalancedCase::B2Single => "B2 (|N|=1)",
            BalancedCase::B2 => "B2 (|N|>1)",
            BalancedCase::B3Single => "B3 (|N|=1)",
            BalancedCase::B3 => "B3 (|N|>1)",
        };
        f.write_str(s)
    }
}

/// Partial graph plus bookkeeping for the balanced construction.
///
/// Per class it keeps a degree histogram, so the minimum and maximum degree
/// (and with them the sets `N_i` and `M_i`) are available in constant time.
#[derive(Debug, Clone)]
pub struct BuildState {
    graph: LabeledGraph,
    target: Vec<Vec<usize>>,
    realized: Vec<Vec<usize>>,
    histograms: Vec<BTreeMap<usize, usize>>,
    steps: usize,
}

impl BuildState {
    /// Starts a build for a feasible instance, optionally from a seed graph.
    ///
    /// The seed must stay within every quota `d_ij` and satisfy the balanced
    /// degree invariant.
    pub fn new(inst: &JdmInstance, seed: Option<LabeledGraph>) -> Result<Self> {
        ensure_feasible(inst)?;
        Self::for_quotas(inst.layout().clone(), inst.matrix().to_vec(), seed)
    }

    /// Starts a build that only has to meet edge quotas between classes; no
    /// degree targets are involved. The quotas must respect class capacities.
    pub fn for_quotas(
        layout: Arc<ClassLayout>,
        target: Vec<Vec<usize>>,
        seed: Option<LabeledGraph>,
    ) -> Result<Self> {
        let k = layout.class_count();
        crate::instance::check_square(&target, k)?;
        let mut violations = Vec::new();
        for i in 0..k {
            for j in i..k {
                if target[i][j] != target[j][i] {
                    return Err(Error::InvalidInstance(format!(
                        "quota matrix is not symmetric at ({i},{j})"
                    )));
                }
                let count = target[i][j];
                if i == j && count > within_capacity(layout.size(i)) {
                    violations.push(Violation::WithinClassCapacity {
                        class: i,
                        count,
                        capacity: within_capacity(layout.size(i)),
                    });
                } else if i != j && count > layout.size(i) * layout.size(j) {
                    violations.push(Violation::CrossClassCapacity {
                        first: i,
                        second: j,
                        count,
                        capacity: layout.size(i) * layout.size(j),
                    });
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::Infeasible(violations));
        }

        let graph = match seed {
            None => LabeledGraph::empty(layout.clone()),
            Some(g) => {
                if !g.layout().same_vertex_set(&layout) {
                    return Err(Error::InvalidSeed(format!(
                        "seed has class sizes {:?}, instance has {:?}",
                        g.layout().sizes(),
                        layout.sizes()
                    )));
                }
                g
            }
        };
        let realized = extract_jdm(&graph).matrix;
        for i in 0..k {
            for j in i..k {
                if realized[i][j] > target[i][j] {
                    return Err(Error::InvalidSeed(format!(
                        "seed has {} edges between classes ({i},{j}), quota is {}",
                        realized[i][j], target[i][j]
                    )));
                }
            }
        }
        let mut histograms = vec![BTreeMap::new(); k];
        for v in 0..graph.vertex_count() {
            *histograms[graph.class_of(v)].entry(graph.degree(v)).or_insert(0) += 1;
        }
        let state = Self {
            graph,
            target,
            realized,
            histograms,
            steps: 0,
        };
        if let Some(class) = (0..k).find(|&c| state.max_degree(c) > state.min_degree(c) + 1) {
            return Err(Error::InvalidSeed(format!(
                "seed degrees in class {class} range over [{}, {}]",
                state.min_degree(class),
                state.max_degree(class)
            )));
        }
        Ok(state)
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn into_graph(self) -> LabeledGraph {
        self.graph
    }

    /// Number of balanced steps taken so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn realized(&self) -> &[Vec<usize>] {
        &self.realized
    }

    pub fn remaining(&self, i: usize, j: usize) -> usize {
        self.target[i][j] - self.realized[i][j]
    }

    /// Quota still missing over all class pairs.
    pub fn total_remaining(&self) -> usize {
        let k = self.target.len();
        (0..k).map(|i| (i..k).map(|j| self.remaining(i, j)).sum::<usize>()).sum()
    }

    pub fn min_degree(&self, class: usize) -> usize {
        *self.histograms[class].keys().next().expect("classes are non-empty")
    }

    pub fn max_degree(&self, class: usize) -> usize {
        *self.histograms[class].keys().next_back().expect("classes are non-empty")
    }

    /// Whether every class has degree spread at most one.
    pub fn is_balanced(&self) -> bool {
        (0..self.target.len()).all(|c| self.max_degree(c) <= self.min_degree(c) + 1)
    }

    /// The lexicographically first class pair `(i, j)`, `i <= j`, whose quota
    /// is not yet met.
    pub fn next_pair(&self) -> Option<(usize, usize)> {
        let k = self.target.len();
        (0..k)
            .flat_map(|i| (i..k).map(move |j| (i, j)))
            .find(|&(i, j)| self.remaining(i, j) > 0)
    }

    fn in_min(&self, v: usize) -> bool {
        self.graph.degree(v) == self.min_degree(self.graph.class_of(v))
    }

    /// `M_i` membership; empty when all degrees of the class agree.
    fn in_max(&self, v: usize) -> bool {
        let c = self.graph.class_of(v);
        self.max_degree(c) > self.min_degree(c) && self.graph.degree(v) == self.max_degree(c)
    }

    fn min_members(&self, class: usize) -> impl Iterator<Item = usize> + '_ {
        self.graph.layout().members(class).filter(move |&v| self.in_min(v))
    }

    /// Smallest pair `(u, v)`, `u in V_i`, `v in V_j`, that is a non-edge and
    /// satisfies the two membership predicates.
    fn find_non_edge(
        &self,
        i: usize,
        j: usize,
        first: impl Fn(usize) -> bool,
        second: impl Fn(usize) -> bool,
    ) -> Option<(usize, usize)> {
        let layout = self.graph.layout();
        for u in layout.members(i).filter(|&u| first(u)) {
            for v in layout.members(j).filter(|&v| v != u && second(v)) {
                if !self.graph.has_edge(u, v) {
                    return Some((u, v));
                }
            }
        }
        None
    }

    /// Smallest neighbor `x` of `from` that `to` could take over, i.e.
    /// `x != to` and `x` not adjacent to `to`.
    fn find_transfer(&self, from: usize, to: usize) -> Result<usize> {
        self.graph
            .neighbors(from)
            .iter()
            .copied()
            .find(|&x| x != to && !self.graph.has_edge(to, x))
            .ok_or_else(|| {
                Error::Internal(format!(
                    "no neighbor of {from} can be handed to {to}",
                ))
            })
    }

    fn nth_min(&self, class: usize, skip: &[usize]) -> Result<usize> {
        self.min_members(class)
            .find(|v| !skip.contains(v))
            .ok_or_else(|| Error::Internal(format!("N_{class} has too few members")))
    }

    fn bump(&mut self, v: usize, added: bool) {
        let c = self.graph.class_of(v);
        let d = self.graph.degree(v);
        let old = if added { d - 1 } else { d + 1 };
        let hist = &mut self.histograms[c];
        let slot = hist.get_mut(&old).expect("degree tracked");
        *slot -= 1;
        if *slot == 0 {
            hist.remove(&old);
        }
        *hist.entry(d).or_insert(0) += 1;
    }

    fn pair_count(&mut self, u: usize, v: usize) -> &mut usize {
        let (a, b) = (self.graph.class_of(u), self.graph.class_of(v));
        &mut self.realized[a.min(b)][a.max(b)]
    }

    fn apply(&mut self, removals: &[(usize, usize)], additions: &[(usize, usize)]) -> Result<()> {
        for &(u, v) in removals {
            if !self.graph.remove_edge(u, v) {
                return Err(Error::Internal(format!("edge ({u},{v}) missing on removal")));
            }
            self.bump(u, false);
            self.bump(v, false);
            *self.pair_count(u, v) -= 1;
        }
        for &(u, v) in additions {
            if u == v || !self.graph.insert_edge(u, v) {
                return Err(Error::Internal(format!("edge ({u},{v}) cannot be added")));
            }
            self.bump(u, true);
            self.bump(v, true);
            *self.pair_count(u, v) += 1;
        }
        let k = self.target.len();
        for a in 0..k {
            for b in a..k {
                self.realized[b][a] = self.realized[a][b];
            }
        }
        Ok(())
    }

    /// Adds one edge between classes `i` and `j`, rewiring as needed so the
    /// balanced degree invariant holds afterwards and every other class pair
    /// keeps its count.
    ///
    /// Cases are tried in the order `A1, A2, A2', A3` for `i != j` and
    /// `B1, B2, B3` for `i == j`; every "pick" takes the smallest qualifying
    /// vertex (pairs in lexicographic order).
    pub fn add_edge_balanced(&mut self, i: usize, j: usize) -> Result<BalancedCase> {
        let (i, j) = (i.min(j), i.max(j));
        if self.remaining(i, j) == 0 {
            return Err(Error::Internal(format!("quota of ({i},{j}) already met")));
        }
        if !self.is_balanced() {
            return Err(Error::Internal("state is not balanced".into()));
        }
        let case = if i != j {
            self.step_cross(i, j)?
        } else {
            self.step_within(i)?
        };
        self.steps += 1;
        for c in [i, j] {
            if self.max_degree(c) > self.min_degree(c) + 1 {
                return Err(Error::Internal(format!("case {case} unbalanced class {c}")));
            }
        }
        Ok(case)
    }

    fn step_cross(&mut self, i: usize, j: usize) -> Result<BalancedCase> {
        if let Some((u, v)) = self.find_non_edge(i, j, |u| self.in_min(u), |v| self.in_min(v)) {
            self.apply(&[], &[(u, v)])?;
            return Ok(BalancedCase::A1);
        }
        if let Some((u, v)) = self.find_non_edge(i, j, |u| self.in_min(u), |v| self.in_max(v)) {
            let v2 = self.nth_min(j, &[])?;
            let x = self.find_transfer(v, v2)?;
            self.apply(&[(v, x)], &[(u, v), (v2, x)])?;
            return Ok(BalancedCase::A2);
        }
        if let Some((u, v)) = self.find_non_edge(i, j, |u| self.in_max(u), |v| self.in_min(v)) {
            let u2 = self.nth_min(i, &[])?;
            let x = self.find_transfer(u, u2)?;
            self.apply(&[(u, x)], &[(u, v), (u2, x)])?;
            return Ok(BalancedCase::A2Mirror);
        }
        let (u, v) = self
            .find_non_edge(i, j, |u| self.in_max(u), |v| self.in_max(v))
            .ok_or_else(|| Error::Internal(format!("no non-edge between classes {i} and {j}")))?;
        let u2 = self.nth_min(i, &[])?;
        let x = self.find_transfer(u, u2)?;
        let v2 = self.nth_min(j, &[])?;
        let y = self.find_transfer(v, v2)?;
        self.apply(&[(u, x), (v, y)], &[(u2, x), (u, v), (v2, y)])?;
        Ok(BalancedCase::A3)
    }

    fn step_within(&mut self, i: usize) -> Result<BalancedCase> {
        if let Some((u, v)) = self.find_non_edge(i, i, |u| self.in_min(u), |v| self.in_min(v)) {
            self.apply(&[], &[(u, v)])?;
            return Ok(BalancedCase::B1);
        }
        let single_min = self.min_members(i).nth(1).is_none();
        let mixed = self.find_non_edge(i, i, |u| self.in_min(u), |v| self.in_max(v));
        if let Some((u, v)) = mixed {
            if single_min {
                self.apply(&[], &[(u, v)])?;
                return Ok(BalancedCase::B2Single);
            }
            let v2 = self.nth_min(i, &[u])?;
            let x = self.find_transfer(v, v2)?;
            self.apply(&[(v, x)], &[(v2, x), (u, v)])?;
            return Ok(BalancedCase::B2);
        }
        let (u, v) = self
            .find_non_edge(i, i, |u| self.in_max(u), |v| self.in_max(v))
            .ok_or_else(|| Error::Internal(format!("no non-edge inside class {i}")))?;
        if single_min {
            let w = self.nth_min(i, &[])?;
            let x = self.find_transfer(u, w)?;
            self.apply(&[(u, x)], &[(w, x), (u, v)])?;
            return Ok(BalancedCase::B3Single);
        }
        let w = self.nth_min(i, &[])?;
        let w2 = self.nth_min(i, &[w])?;
        let x = self.find_transfer(u, w)?;
        let y = self.find_transfer(v, w2)?;
        self.apply(&[(u, x), (v, y)], &[(w, x), (u, v), (w2, y)])?;
        Ok(BalancedCase::B3)
    }

    /// Runs balanced steps on the first unmet pair until every quota is met.
    pub fn run(mut self) -> Result<LabeledGraph> {
        while let Some((i, j)) = self.next_pair() {
            self.add_edge_balanced(i, j)?;
        }
        Ok(self.graph)
    }
}

/// Realizes `inst` with the balanced construction, optionally growing a
/// balanced seed graph (typically a spanning tree) that respects all quotas.
///
/// Performs exactly `sum_{i<=j} d_ij - |E(seed)|` steps. A connected seed
/// gives a connected result.
pub fn balanced_realize(inst: &JdmInstance, seed: Option<LabeledGraph>) -> Result<LabeledGraph> {
    BuildState::new(inst, seed)?.run()
}
