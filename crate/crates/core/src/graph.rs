//! Simple undirected graphs over a class layout.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instance::{ClassLayout, VertexId};

/// An undirected edge `(u, v)` with `u < v`, as dense vertex indices.
pub type Edge = (usize, usize);

/// Normalizes an unordered pair so the smaller index comes first.
pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A simple graph on the vertices of a [`ClassLayout`].
///
/// Neighbor lists are kept sorted, so two graphs compare equal exactly when
/// their edge sets are equal. Equality, hashing and ordering look only at the
/// class sizes and the edges, not at class names.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    layout: Arc<ClassLayout>,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl LabeledGraph {
    pub fn empty(layout: Arc<ClassLayout>) -> Self {
        let n = layout.vertex_count();
        Self {
            layout,
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting loops, repeated edges and
    /// out-of-range endpoints.
    pub fn from_edges(
        layout: Arc<ClassLayout>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let mut g = Self::empty(layout);
        let n = g.vertex_count();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInstance(format!(
                    "edge ({u},{v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("self-loop at vertex {u}")));
            }
            if !g.insert_edge(u, v) {
                return Err(Error::InvalidInstance(format!("edge ({u},{v}) listed twice")));
            }
        }
        Ok(g)
    }

    pub fn layout(&self) -> &Arc<ClassLayout> {
        &self.layout
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.layout.class_of(v)
    }

    pub fn vertex_id(&self, v: usize) -> VertexId {
        self.layout.vertex_id(v)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Inserts `uv`; returns `false` if it was already present.
    ///
    /// # Panics
    /// On a self-loop.
    pub fn insert_edge(&mut self, u: usize, v: usize) -> bool {
        assert_ne!(u, v, "self-loop at vertex {u}");
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.edge_count += 1;
                true
            }
        }
    }

    /// Removes `uv`; returns `false` if it was absent.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        match self.adj[u].binary_search(&v) {
            Err(_) => false,
            Ok(pos) => {
                self.adj[u].remove(pos);
                let pos = self.adj[v].binary_search(&u).unwrap();
                self.adj[v].remove(pos);
                self.edge_count -= 1;
                true
            }
        }
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Canonical edge-set key; equal for equal graphs.
    pub fn edge_key(&self) -> Vec<Edge> {
        self.edges().collect()
    }

    /// Component label per vertex, labels numbered by first appearance.
    pub fn component_labels(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Checks the representation: sorted, loop-free, duplicate-free and
    /// symmetric adjacency, and a consistent edge count.
    pub fn check_representation(&self) -> Result<()> {
        let mut half_edges = 0;
        for (u, ns) in self.adj.iter().enumerate() {
            if !ns.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Internal(format!("neighbors of {u} not strictly sorted")));
            }
            for &v in ns {
                if v == u {
                    return Err(Error::Internal(format!("self-loop at {u}")));
                }
                if v >= self.adj.len() || self.adj[v].binary_search(&u).is_err() {
                    return Err(Error::Internal(format!("edge ({u},{v}) is not symmetric")));
                }
            }
            half_edges += ns.len();
        }
        if half_edges != 2 * self.edge_count {
            return Err(Error::Internal("edge count out of sync".into()));
        }
        Ok(())
    }
}

impl PartialEq for LabeledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.layout.sizes() == other.layout.sizes() && self.adj == other.adj
    }
}

impl Eq for LabeledGraph {}

impl Hash for LabeledGraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.layout.sizes().hash(state);
        self.adj.hash(state);
    }
}

impl PartialOrd for LabeledGraph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LabeledGraph {
    fn cmp(&self, other: &Self) -> Ordering {
        self.layout
            .sizes()
            .cmp(other.layout.sizes())
            .then_with(|| self.edges().cmp(other.edges()))
    }
}
