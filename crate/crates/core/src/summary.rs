//! Checking graphs against instances, and reading instances off graphs.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::instance::{ClassLayout, JdmInstance};

/// The joint-degree data actually realized by a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JdmSummary {
    layout: Arc<ClassLayout>,
    /// Sorted degree multiset of each class.
    pub class_degrees: Vec<Vec<usize>>,
    /// `matrix[i][j]` edges between classes `i` and `j` (inside `i` on the diagonal).
    pub matrix: Vec<Vec<usize>>,
}

impl JdmSummary {
    pub fn layout(&self) -> &Arc<ClassLayout> {
        &self.layout
    }

    /// Number of edges counted by the matrix, `sum_{i <= j} m_ij`.
    pub fn edge_total(&self) -> usize {
        let k = self.matrix.len();
        (0..k).map(|i| (i..k).map(|j| self.matrix[i][j]).sum::<usize>()).sum()
    }

    /// Whether all vertices of each class share one degree.
    pub fn is_class_regular(&self) -> bool {
        self.class_degrees
            .iter()
            .all(|ds| ds.first() == ds.last())
    }

    /// The instance this graph realizes, if it is class-regular.
    pub fn to_instance(&self) -> Option<JdmInstance> {
        if !self.is_class_regular() {
            return None;
        }
        let degrees = self.class_degrees.iter().map(|ds| ds[0]).collect();
        JdmInstance::from_layout(self.layout.clone(), degrees, self.matrix.clone()).ok()
    }
}

/// Counts the degree multiset of every class and the edges between every
/// pair of classes.
pub fn extract_jdm(g: &LabeledGraph) -> JdmSummary {
    let layout = g.layout().clone();
    let k = layout.class_count();
    let mut matrix = vec![vec![0; k]; k];
    for (u, v) in g.edges() {
        let (a, b) = (g.class_of(u), g.class_of(v));
        matrix[a][b] += 1;
        if a != b {
            matrix[b][a] += 1;
        }
    }
    let class_degrees = (0..k)
        .map(|c| {
            let mut ds: Vec<_> = layout.members(c).map(|v| g.degree(v)).collect();
            ds.sort_unstable();
            ds
        })
        .collect();
    JdmSummary {
        layout,
        class_degrees,
        matrix,
    }
}

/// Whether `g` realizes `inst`: every vertex has its class degree and every
/// class pair carries exactly `d_ij` edges.
///
/// Errors only when the graph and the instance have different vertex sets.
pub fn validate_realization(g: &LabeledGraph, inst: &JdmInstance) -> Result<bool> {
    Ok(realization_defect(g, inst)?.is_none())
}

/// Like [`validate_realization`], but describes the first defect found.
pub fn realization_defect(g: &LabeledGraph, inst: &JdmInstance) -> Result<Option<String>> {
    if !g.layout().same_vertex_set(inst.layout()) {
        return Err(Error::VertexSetMismatch(format!(
            "graph has class sizes {:?}, instance has {:?}",
            g.layout().sizes(),
            inst.sizes()
        )));
    }
    for v in 0..g.vertex_count() {
        let want = inst.degree(g.class_of(v));
        if g.degree(v) != want {
            return Ok(Some(format!(
                "vertex {} has degree {}, class degree is {want}",
                g.vertex_id(v),
                g.degree(v)
            )));
        }
    }
    let summary = extract_jdm(g);
    let k = inst.class_count();
    for i in 0..k {
        for j in i..k {
            if summary.matrix[i][j] != inst.entry(i, j) {
                return Ok(Some(format!(
                    "classes ({i},{j}) carry {} edges, instance requires {}",
                    summary.matrix[i][j],
                    inst.entry(i, j)
                )));
            }
        }
    }
    Ok(None)
}

/// Errors with [`Error::NotARealization`] unless `g` realizes `inst`.
pub fn ensure_realization(g: &LabeledGraph, inst: &JdmInstance) -> Result<()> {
    match realization_defect(g, inst)? {
        None => Ok(()),
        Some(defect) => Err(Error::NotARealization(defect)),
    }
}

/// Regroups the vertices of `g` into one class per distinct degree, so the
/// result is class-regular by construction. Classes are ordered by degree
/// and named `d<degree>`; vertices keep their relative order.
pub fn regroup_by_degree(g: &LabeledGraph) -> LabeledGraph {
    let n = g.vertex_count();
    let mut distinct: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut new_index = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        new_index[v] = i;
    }
    let sizes = distinct
        .iter()
        .map(|&d| (0..n).filter(|&v| g.degree(v) == d).count())
        .collect();
    let names = distinct.iter().map(|d| format!("d{d}")).collect();
    let layout = Arc::new(ClassLayout::with_names(names, sizes).expect("non-empty classes"));
    LabeledGraph::from_edges(layout, g.edges().map(|(u, v)| (new_index[u], new_index[v])))
        .expect("relabeling preserves simplicity")
}
