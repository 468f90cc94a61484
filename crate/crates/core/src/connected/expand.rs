//! From a valid contracted tree to a balanced spanning tree on all vertices.

use std::collections::VecDeque;

use super::{contract, ValidTree};
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::instance::JdmInstance;

/// A spanning tree whose class degrees differ by at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedTree {
    pub tree: LabeledGraph,
    /// Neighbor moves spent on each class.
    pub moves: Vec<usize>,
}

/// Maps the contracted tree onto the original vertices and hangs the
/// `n_i - |V~_i|` remaining vertices of each class as a path off its first
/// vertex.
///
/// Contracted vertex `(i, o)` becomes original vertex `(i, o)`, so the extra
/// vertices are offsets `|V~_i|..n_i`. The path adds `n_i - |V~_i|` edges
/// inside class `i`, which is `min(d_ii, n_i - 1) <= d_ii`.
pub fn expand_tree(t: &ValidTree, inst: &JdmInstance) -> Result<LabeledGraph> {
    let contracted = contract(inst);
    let tree = &t.tree;
    if tree.layout().sizes() != contracted.sizes() {
        return Err(Error::InvalidSeed(format!(
            "tree has class sizes {:?}, contraction has {:?}",
            tree.layout().sizes(),
            contracted.sizes()
        )));
    }
    if tree.edge_count() + 1 != tree.vertex_count() || !tree.is_connected() {
        return Err(Error::InvalidSeed("contracted graph is not a spanning tree".into()));
    }
    let k = inst.class_count();
    let mut counts = vec![vec![0; k]; k];
    for (a, b) in tree.edges() {
        let (ca, cb) = (tree.class_of(a), tree.class_of(b));
        counts[ca][cb] += 1;
        if ca != cb {
            counts[cb][ca] += 1;
        }
    }
    for i in 0..k {
        for j in 0..k {
            if counts[i][j] > contracted.matrix()[i][j] {
                return Err(Error::InvalidSeed(format!(
                    "contracted tree exceeds the capacity of classes ({i},{j})"
                )));
            }
        }
    }

    let layout = inst.layout().clone();
    let lift = |v: usize| {
        let id = tree.vertex_id(v);
        layout.members(id.class).start + id.offset
    };
    let mut g = LabeledGraph::from_edges(layout.clone(), tree.edges().map(|(a, b)| (lift(a), lift(b))))?;
    for i in 0..k {
        let start = layout.members(i).start;
        let mut prev = start;
        for offset in contracted.sizes()[i]..inst.sizes()[i] {
            g.insert_edge(prev, start + offset);
            prev = start + offset;
        }
    }
    Ok(g)
}

/// Evens out degrees inside every class of a spanning tree.
///
/// While some class has degrees `max - min >= 2`, take its smallest vertex
/// `u` of maximum degree and smallest vertex `v` of minimum degree, and move
/// the smallest neighbor of `u` that is not on the `u`-`v` path over to `v`.
/// The result is still a spanning tree and every class-pair count is
/// unchanged. Each move lowers `sum (deg - mean)^2` over the class by at
/// least 2, which bounds the number of moves.
pub fn balance_tree(t: &LabeledGraph, inst: &JdmInstance) -> Result<BalancedTree> {
    if !t.layout().same_vertex_set(inst.layout()) {
        return Err(Error::VertexSetMismatch(format!(
            "tree has class sizes {:?}, instance has {:?}",
            t.layout().sizes(),
            inst.sizes()
        )));
    }
    let n = t.vertex_count();
    if t.edge_count() + 1 != n || !t.is_connected() {
        return Err(Error::InvalidSeed("graph is not a spanning tree".into()));
    }
    let mut g = t.clone();
    let layout = g.layout().clone();
    let mut moves = vec![0; inst.class_count()];
    for class in 0..inst.class_count() {
        loop {
            let members = layout.members(class);
            let max = members.clone().map(|v| g.degree(v)).max().unwrap_or(0);
            let min = members.clone().map(|v| g.degree(v)).min().unwrap_or(0);
            if max < min + 2 {
                break;
            }
            let u = members.clone().find(|&v| g.degree(v) == max).unwrap();
            let v = members.clone().find(|&v| g.degree(v) == min).unwrap();
            let toward_v = path_neighbor(&g, u, v);
            let w = g
                .neighbors(u)
                .iter()
                .copied()
                .find(|&w| w != toward_v)
                .ok_or_else(|| Error::Internal(format!("vertex {u} has nothing to move")))?;
            g.remove_edge(u, w);
            if !g.insert_edge(v, w) {
                return Err(Error::Internal(format!("moving {w} to {v} closes a cycle")));
            }
            moves[class] += 1;
        }
    }
    Ok(BalancedTree { tree: g, moves })
}

/// The neighbor of `u` on the tree path from `u` to `v`.
fn path_neighbor(g: &LabeledGraph, u: usize, v: usize) -> usize {
    let mut parent = vec![usize::MAX; g.vertex_count()];
    parent[v] = v;
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        if x == u {
            break;
        }
        for &y in g.neighbors(x) {
            if parent[y] == usize::MAX {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    parent[u]
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::instance::ClassLayout;
    use crate::summary::extract_jdm;

    fn inst(sizes: &[usize], degrees: &[usize], matrix: &[&[usize]]) -> JdmInstance {
        JdmInstance::new(
            sizes.to_vec(),
            degrees.to_vec(),
            matrix.iter().map(|r| r.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn triangle_expands_to_a_path() {
        let i = inst(&[3], &[2], &[&[3]]);
        let c = contract(&i);
        let t = ValidTree {
            tree: LabeledGraph::empty(c.layout().clone()),
        };
        let g = expand_tree(&t, &i).unwrap();
        assert_eq!(g.edge_key(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn expansion_within_counts() {
        // n = 4, d_11 = 2: |V~| = 2, so two path edges are added.
        let i = inst(&[4, 1], &[2, 4], &[&[2, 4], &[4, 0]]);
        let c = contract(&i);
        assert_eq!(c.sizes(), &[2, 1]);
        let t = ValidTree {
            tree: LabeledGraph::from_edges(c.layout().clone(), [(0, 2), (1, 2)]).unwrap(),
        };
        let g = expand_tree(&t, &i).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_connected());
        let s = extract_jdm(&g);
        assert_eq!(s.matrix[0][0], 2);
        assert_eq!(s.matrix[0][1], 2);
    }

    #[test]
    fn star_becomes_balanced() {
        let layout = Arc::new(ClassLayout::new(vec![4]).unwrap());
        let star = LabeledGraph::from_edges(layout, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let i = inst(&[4], &[2], &[&[4]]);
        let b = balance_tree(&star, &i).unwrap();
        let mut degrees: Vec<_> = (0..4).map(|v| b.tree.degree(v)).collect();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![1, 1, 2, 2]);
        assert!(b.tree.is_connected());
        assert_eq!(b.tree.edge_count(), 3);
        assert_eq!(b.moves, vec![1]);
    }

    #[test]
    fn balanced_path_is_unchanged() {
        let layout = Arc::new(ClassLayout::new(vec![4]).unwrap());
        let path = LabeledGraph::from_edges(layout, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let i = inst(&[4], &[2], &[&[4]]);
        let b = balance_tree(&path, &i).unwrap();
        assert_eq!(b.tree, path);
        assert_eq!(b.moves, vec![0]);
    }

    #[test]
    fn non_tree_is_rejected() {
        let layout = Arc::new(ClassLayout::new(vec![3]).unwrap());
        let tri = LabeledGraph::from_edges(layout, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let i = inst(&[3], &[2], &[&[3]]);
        assert!(balance_tree(&tri, &i).is_err());
    }
}
