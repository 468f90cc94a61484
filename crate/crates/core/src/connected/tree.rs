//! Search for a spanning tree of the contracted vertex set.
//!
//! The working graph `G0` always has `|V~| - 1` edges within the capacities.
//! While it is disconnected, every iteration looks at the subgraph `G`
//! induced by the classes still *active* at the current recursion depth:
//!
//! * **Case 1**: a capacity-respecting edge joins two components of `G`.
//!   Add it and drop the smallest edge lying on a cycle of `G`.
//! * **Case 2**: some class meets a cycle of `G` and also touches two
//!   components of `G`. Rewire around that class so the two components merge.
//! * **Case 3**: no class touches two components of `G`. The components of
//!   `G` give a certificate.
//! * **Case 4**: remove every class touching two components and descend.
//!
//! After Case 1 or 2 one level of removed classes is restored (their edges
//! never left `G0`, so restoring a level is re-activating its classes).

use serde::Serialize;

use super::certificate::evaluate_contracted;
use super::{Certificate, ContractedInstance, ValidTree};
use crate::error::{Error, Result};
use crate::graph::{edge, Edge, LabeledGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeOutcome {
    Tree(ValidTree),
    Certificate(Certificate),
}

/// Counters collected while searching.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TreeSearchStats {
    pub iterations: usize,
    pub max_depth: usize,
    /// Number of times Cases 1 to 4 fired.
    pub case_counts: [usize; 4],
    /// Components of the initial greedy graph.
    pub initial_components: usize,
}

struct Frame {
    removed: Vec<usize>,
    removed_edges: Vec<Edge>,
}

struct Search<'a> {
    contracted: &'a ContractedInstance,
    g0: LabeledGraph,
    counts: Vec<Vec<usize>>,
    active: Vec<bool>,
    stack: Vec<Frame>,
}

/// Per-iteration view of the active subgraph.
struct View {
    /// Component per vertex; `usize::MAX` for inactive vertices.
    component: Vec<usize>,
    /// Edges of the active subgraph that lie on a cycle, sorted.
    cycle_edges: Vec<Edge>,
    on_cycle: Vec<bool>,
}

impl<'a> Search<'a> {
    fn class_of(&self, v: usize) -> usize {
        self.g0.class_of(v)
    }

    fn has_capacity(&self, a: usize, b: usize) -> bool {
        let (ca, cb) = (self.class_of(a), self.class_of(b));
        ca != cb && self.counts[ca][cb] < self.contracted.matrix()[ca][cb]
    }

    fn add(&mut self, a: usize, b: usize) -> Result<()> {
        if !self.has_capacity(a, b) || !self.g0.insert_edge(a, b) {
            return Err(Error::Internal(format!("cannot add tree edge ({a},{b})")));
        }
        let (ca, cb) = (self.class_of(a), self.class_of(b));
        self.counts[ca][cb] += 1;
        self.counts[cb][ca] += 1;
        Ok(())
    }

    fn remove(&mut self, a: usize, b: usize) -> Result<()> {
        if !self.g0.remove_edge(a, b) {
            return Err(Error::Internal(format!("tree edge ({a},{b}) missing")));
        }
        let (ca, cb) = (self.class_of(a), self.class_of(b));
        self.counts[ca][cb] -= 1;
        self.counts[cb][ca] -= 1;
        Ok(())
    }

    fn is_active(&self, v: usize) -> bool {
        self.active[self.class_of(v)]
    }

    fn view(&self) -> View {
        let n = self.g0.vertex_count();
        let mut component = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if !self.is_active(s) || component[s] != usize::MAX {
                continue;
            }
            component[s] = next;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in self.g0.neighbors(u) {
                    if self.is_active(w) && component[w] == usize::MAX {
                        component[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        let bridges = self.bridges();
        let cycle_edges: Vec<Edge> = self
            .g0
            .edges()
            .filter(|&(a, b)| self.is_active(a) && self.is_active(b))
            .filter(|e| bridges.binary_search(e).is_err())
            .collect();
        let mut on_cycle = vec![false; n];
        for &(a, b) in &cycle_edges {
            on_cycle[a] = true;
            on_cycle[b] = true;
        }
        View {
            component,
            cycle_edges,
            on_cycle,
        }
    }

    /// Bridges of the active subgraph, sorted. Iterative low-link DFS.
    fn bridges(&self) -> Vec<Edge> {
        let n = self.g0.vertex_count();
        let mut tin = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut timer = 0;
        let mut out = Vec::new();
        for s in 0..n {
            if !self.is_active(s) || tin[s] != usize::MAX {
                continue;
            }
            tin[s] = timer;
            low[s] = timer;
            timer += 1;
            // (vertex, parent, next neighbor position)
            let mut stack = vec![(s, usize::MAX, 0usize)];
            while let Some(top) = stack.len().checked_sub(1) {
                let (v, parent, pos) = stack[top];
                if let Some(&w) = self.g0.neighbors(v).get(pos) {
                    stack[top].2 += 1;
                    if !self.is_active(w) || w == parent {
                        continue;
                    }
                    if tin[w] == usize::MAX {
                        tin[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, v, 0));
                    } else {
                        low[v] = low[v].min(tin[w]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[v]);
                        if low[v] > tin[parent] {
                            out.push(edge(parent, v));
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn pop_frame(&mut self) -> Result<()> {
        if let Some(frame) = self.stack.pop() {
            for &(a, b) in &frame.removed_edges {
                if !self.g0.has_edge(a, b) {
                    return Err(Error::Internal(format!(
                        "edge ({a},{b}) of a removed level vanished"
                    )));
                }
            }
            for c in frame.removed {
                self.active[c] = true;
            }
        }
        Ok(())
    }

    fn check_invariants(&self) -> Result<()> {
        let n = self.g0.vertex_count();
        if self.g0.edge_count() != n - 1 {
            return Err(Error::Internal(format!(
                "working graph has {} edges, expected {}",
                self.g0.edge_count(),
                n - 1
            )));
        }
        let k = self.counts.len();
        for i in 0..k {
            for j in 0..k {
                if self.counts[i][j] > self.contracted.matrix()[i][j] {
                    return Err(Error::Internal(format!("capacity of ({i},{j}) exceeded")));
                }
            }
        }
        Ok(())
    }

    /// Case 1: smallest capacity-respecting pair across two components.
    fn joining_edge(&self, view: &View) -> Option<Edge> {
        let n = self.g0.vertex_count();
        (0..n)
            .filter(|&a| view.component[a] != usize::MAX)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| {
                view.component[b] != usize::MAX
                    && view.component[a] != view.component[b]
                    && self.has_capacity(a, b)
            })
    }

    /// Case 2 choice of `(u, v)`: `u` on a cycle, `v` in the same class but
    /// another component of `G`. Pairs whose endpoints are also disconnected
    /// in `G0` are preferred.
    fn rewiring_pair(&self, view: &View, classes: &[usize]) -> Option<(usize, usize)> {
        let layout = self.g0.layout();
        let g0_component = self.g0.component_labels();
        let candidates: Vec<(usize, usize)> = classes
            .iter()
            .flat_map(|&c| {
                let members = layout.members(c);
                members
                    .clone()
                    .filter(|&u| view.on_cycle[u])
                    .flat_map(move |u| members.clone().map(move |v| (u, v)))
            })
            .filter(|&(u, v)| view.component[u] != view.component[v])
            .collect();
        candidates
            .iter()
            .copied()
            .find(|&(u, v)| g0_component[u] != g0_component[v])
            .or_else(|| candidates.first().copied())
    }
}

/// Finds a spanning tree of the contracted vertex set within the capacities
/// `d~`, or a certificate that no connected realization exists.
///
/// Ties are broken by the smallest vertex (pairs lexicographically). The
/// initial graph is built greedily: first capacity-respecting edges that join
/// two components, then any capacity-respecting edges until it has
/// `|V~| - 1` of them. If the capacities allow fewer edges than that in
/// total, the certificate with empty `F` is returned immediately.
pub fn valid_tree_construction(
    contracted: &ContractedInstance,
) -> Result<(TreeOutcome, TreeSearchStats)> {
    let layout = contracted.layout().clone();
    let n = layout.vertex_count();
    let k = layout.class_count();
    let mut search = Search {
        contracted,
        g0: LabeledGraph::empty(layout),
        counts: vec![vec![0; k]; k],
        active: vec![true; k],
        stack: Vec::new(),
    };
    let mut stats = TreeSearchStats::default();
    let target = n - 1;

    // Greedy spanning forest, then arbitrary filling.
    let mut forest: Vec<usize> = (0..n).collect();
    fn root(forest: &mut [usize], mut v: usize) -> usize {
        while forest[v] != v {
            forest[v] = forest[forest[v]];
            v = forest[v];
        }
        v
    }
    for a in 0..n {
        for b in a + 1..n {
            if search.g0.edge_count() == target {
                break;
            }
            let (ra, rb) = (root(&mut forest, a), root(&mut forest, b));
            if ra != rb && search.has_capacity(a, b) {
                search.add(a, b)?;
                forest[ra] = rb;
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if search.g0.edge_count() == target {
                break;
            }
            if !search.g0.has_edge(a, b) && search.has_capacity(a, b) {
                search.add(a, b)?;
            }
        }
    }
    stats.initial_components = search.g0.component_count();
    if search.g0.edge_count() < target {
        return Ok((TreeOutcome::Certificate(short_capacity_certificate(&search)), stats));
    }

    let limit = 4 * k * n + 16;
    loop {
        search.check_invariants()?;
        if search.g0.is_connected() {
            let tree = ValidTree { tree: search.g0 };
            return Ok((TreeOutcome::Tree(tree), stats));
        }
        stats.iterations += 1;
        if stats.iterations > limit {
            return Err(Error::Internal(format!(
                "tree search exceeded {limit} iterations"
            )));
        }
        let view = search.view();

        if let Some((a, b)) = search.joining_edge(&view) {
            let &(x, y) = view.cycle_edges.first().ok_or_else(|| {
                Error::Internal("disconnected working graph without a cycle".into())
            })?;
            search.add(a, b)?;
            search.remove(x, y)?;
            stats.case_counts[0] += 1;
            search.pop_frame()?;
            continue;
        }

        let mut touching: Vec<Vec<usize>> = vec![Vec::new(); k];
        let mut cycle_classes = vec![false; k];
        for v in 0..n {
            if view.component[v] != usize::MAX {
                let c = search.class_of(v);
                if !touching[c].contains(&view.component[v]) {
                    touching[c].push(view.component[v]);
                }
                cycle_classes[c] |= view.on_cycle[v];
            }
        }
        let split: Vec<usize> = (0..k).filter(|&c| touching[c].len() >= 2).collect();
        let rewirable: Vec<usize> = split.iter().copied().filter(|&c| cycle_classes[c]).collect();

        if !rewirable.is_empty() {
            let (u, v) = search.rewiring_pair(&view, &rewirable).ok_or_else(|| {
                Error::Internal("split cycle class without a rewiring pair".into())
            })?;
            let x = search
                .g0
                .neighbors(u)
                .iter()
                .copied()
                .find(|&x| view.cycle_edges.binary_search(&edge(u, x)).is_ok())
                .ok_or_else(|| Error::Internal(format!("vertex {u} has no cycle edge")))?;
            let y = search
                .g0
                .neighbors(v)
                .iter()
                .copied()
                .find(|&y| search.is_active(y));
            search.remove(x, u)?;
            if let Some(y) = y {
                search.remove(y, v)?;
            }
            search.add(x, v)?;
            if let Some(y) = y {
                search.add(y, u)?;
            }
            stats.case_counts[1] += 1;
            search.pop_frame()?;
            continue;
        }

        if split.is_empty() {
            stats.case_counts[2] += 1;
            let components = view.component.iter().filter(|&&c| c != usize::MAX).max();
            let count = components.map_or(0, |m| m + 1);
            let mut groups = vec![Vec::new(); count];
            for c in (0..k).filter(|&c| search.active[c]) {
                let comp = touching[c][0];
                groups[comp].push(c);
            }
            if groups.iter().any(Vec::is_empty) {
                return Err(Error::Internal("component without a whole class".into()));
            }
            let mut family: Vec<usize> = groups.iter().flatten().copied().collect();
            family.sort_unstable();
            return Ok((TreeOutcome::Certificate(Certificate { family, groups }), stats));
        }

        stats.case_counts[3] += 1;
        let removed_edges = search
            .g0
            .edges()
            .filter(|&(a, b)| {
                search.is_active(a)
                    && search.is_active(b)
                    && (split.contains(&search.class_of(a)) || split.contains(&search.class_of(b)))
            })
            .collect();
        for &c in &split {
            search.active[c] = false;
        }
        search.stack.push(Frame {
            removed: split,
            removed_edges,
        });
        stats.max_depth = stats.max_depth.max(search.stack.len());
    }
}

/// Certificate for capacities that cannot even carry `|V~| - 1` edges.
///
/// Grouping classes by the components of the greedy forest works whenever
/// no class is split between components; otherwise the empty family does,
/// since then the weights are just the capacities.
fn short_capacity_certificate(search: &Search<'_>) -> Certificate {
    let layout = search.g0.layout();
    let labels = search.g0.component_labels();
    let count = search.g0.component_count();
    let mut groups = vec![Vec::new(); count];
    let mut whole = true;
    for c in 0..layout.class_count() {
        let members = layout.members(c);
        let first = labels[members.start];
        whole &= members.clone().all(|v| labels[v] == first);
        groups[first].push(c);
    }
    if whole {
        let cert = Certificate {
            family: (0..layout.class_count()).collect(),
            groups,
        };
        if evaluate_contracted(search.contracted, &cert).is_ok_and(|e| e.refutes) {
            return cert;
        }
    }
    Certificate {
        family: Vec::new(),
        groups: Vec::new(),
    }
}
