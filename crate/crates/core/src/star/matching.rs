//! Matchings in general graphs given as edge lists over `0..n`.

use petgraph::algo::maximum_matching as petgraph_maximum_matching;
use petgraph::graph::{NodeIndex, UnGraph};

use crate::graph::{edge, Edge};

fn build(vertex_count: usize, edges: &[Edge]) -> UnGraph<(), ()> {
    let mut g = UnGraph::with_capacity(vertex_count, edges.len());
    for _ in 0..vertex_count {
        g.add_node(());
    }
    for &(a, b) in edges {
        g.add_edge(NodeIndex::new(a), NodeIndex::new(b), ());
    }
    g
}

/// A maximum matching (Edmonds' blossom algorithm), as sorted edges.
pub fn maximum_matching(vertex_count: usize, edges: &[Edge]) -> Vec<Edge> {
    let g = build(vertex_count, edges);
    let m = petgraph_maximum_matching(&g);
    let mut out: Vec<Edge> = m.edges().map(|(a, b)| edge(a.index(), b.index())).collect();
    out.sort_unstable();
    out
}

/// A perfect matching, if the graph has one.
pub fn perfect_matching(vertex_count: usize, edges: &[Edge]) -> Option<Vec<Edge>> {
    if vertex_count % 2 == 1 {
        return None;
    }
    let m = maximum_matching(vertex_count, edges);
    (2 * m.len() == vertex_count).then_some(m)
}
