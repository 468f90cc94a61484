//! Joint-degree instances and their feasibility conditions.
//!
//! An instance fixes a partition of the vertex set into degree classes
//! `V_0, ..., V_{k-1}`, a target degree for every class and a symmetric
//! matrix `D` whose entry `d_ij` is the exact number of edges between
//! `V_i` and `V_j` (or inside `V_i` when `i == j`).
//!
//! Vertices are addressed either by [`VertexId`] (class, offset) or by their
//! dense index `0..n`; the two orders agree, so the dense index is what the
//! algorithms use internally and for tie-breaking.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};

/// A vertex named by its class and its offset inside that class.
///
/// Ordering is lexicographic on `(class, offset)`, which is the same order as
/// the dense vertex index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId {
    pub class: usize,
    pub offset: usize,
}

impl VertexId {
    pub const fn new(class: usize, offset: usize) -> Self {
        Self { class, offset }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.class, self.offset)
    }
}

/// The class structure shared by an instance and every graph built for it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassLayout {
    names: Vec<String>,
    sizes: Vec<usize>,
    starts: Vec<usize>,
    class_of: Vec<usize>,
}

impl ClassLayout {
    /// Layout with default class names `V0, V1, ...`.
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        let names = (0..sizes.len()).map(|i| format!("V{i}")).collect();
        Self::with_names(names, sizes)
    }

    pub fn with_names(names: Vec<String>, sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidInstance("at least one class is required".into()));
        }
        if names.len() != sizes.len() {
            return Err(Error::InvalidInstance(format!(
                "{} class names for {} classes",
                names.len(),
                sizes.len()
            )));
        }
        if let Some(i) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidInstance(format!("class {i} is empty")));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == ':') {
                return Err(Error::InvalidInstance(format!(
                    "class {i} has an unusable name {name:?} (empty, whitespace or ':')"
                )));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidInstance(format!("duplicate class name {name:?}")));
            }
        }
        let mut starts = Vec::with_capacity(sizes.len());
        let mut class_of = Vec::new();
        for (class, &size) in sizes.iter().enumerate() {
            starts.push(class_of.len());
            class_of.extend(std::iter::repeat(class).take(size));
        }
        Ok(Self {
            names,
            sizes,
            starts,
            class_of,
        })
    }

    pub fn class_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.class_of.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, class: usize) -> usize {
        self.sizes[class]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, class: usize) -> &str {
        &self.names[class]
    }

    pub fn class_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    /// Dense indices of the vertices of `class`.
    pub fn members(&self, class: usize) -> std::ops::Range<usize> {
        let start = self.starts[class];
        start..start + self.sizes[class]
    }

    pub fn vertex_id(&self, v: usize) -> VertexId {
        let class = self.class_of[v];
        VertexId::new(class, v - self.starts[class])
    }

    pub fn index_of(&self, id: VertexId) -> Option<usize> {
        (id.class < self.sizes.len() && id.offset < self.sizes[id.class])
            .then(|| self.starts[id.class] + id.offset)
    }

    /// `Name_offset`, the label used by the edge-list format.
    pub fn label(&self, v: usize) -> String {
        let id = self.vertex_id(v);
        format!("{}_{}", self.names[id.class], id.offset)
    }

    /// Two layouts describe the same vertex set when their class sizes agree.
    pub fn same_vertex_set(&self, other: &ClassLayout) -> bool {
        self.sizes == other.sizes
    }
}

/// A joint-degree instance `<V, d, D>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JdmInstance {
    layout: Arc<ClassLayout>,
    degrees: Vec<usize>,
    matrix: Vec<Vec<usize>>,
}

impl JdmInstance {
    /// Builds an instance with default class names.
    ///
    /// Fails when the matrix is not `k x k` or not symmetric, or a class is
    /// empty. Feasibility is *not* checked here.
    pub fn new(sizes: Vec<usize>, degrees: Vec<usize>, matrix: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_layout(Arc::new(ClassLayout::new(sizes)?), degrees, matrix)
    }

    pub fn from_layout(
        layout: Arc<ClassLayout>,
        degrees: Vec<usize>,
        matrix: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let k = layout.class_count();
        if degrees.len() != k {
            return Err(Error::InvalidInstance(format!(
                "{} class degrees for {k} classes",
                degrees.len()
            )));
        }
        check_square(&matrix, k)?;
        for i in 0..k {
            for j in i + 1..k {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::InvalidInstance(format!(
                        "matrix is not symmetric: entry ({i},{j}) = {} but ({j},{i}) = {}",
                        matrix[i][j], matrix[j][i]
                    )));
                }
            }
        }
        Ok(Self {
            layout,
            degrees,
            matrix,
        })
    }

    pub fn layout(&self) -> &Arc<ClassLayout> {
        &self.layout
    }

    pub fn class_count(&self) -> usize {
        self.layout.class_count()
    }

    pub fn vertex_count(&self) -> usize {
        self.layout.vertex_count()
    }

    pub fn sizes(&self) -> &[usize] {
        self.layout.sizes()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, class: usize) -> usize {
        self.degrees[class]
    }

    pub fn matrix(&self) -> &[Vec<usize>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> usize {
        self.matrix[i][j]
    }

    /// Total number of edges any realization has: `sum_{i <= j} d_ij`.
    pub fn edge_total(&self) -> usize {
        let k = self.class_count();
        (0..k).map(|i| (i..k).map(|j| self.matrix[i][j]).sum::<usize>()).sum()
    }
}

pub(crate) fn check_square<T>(matrix: &[Vec<T>], k: usize) -> Result<()> {
    if matrix.len() != k {
        return Err(Error::InvalidInstance(format!(
            "matrix has {} rows, expected {k}",
            matrix.len()
        )));
    }
    if let Some((i, row)) = matrix.iter().enumerate().find(|(_, row)| row.len() != k) {
        return Err(Error::InvalidInstance(format!(
            "matrix row {i} has {} entries, expected {k}",
            row.len()
        )));
    }
    Ok(())
}

/// Largest number of edges that fit inside one class of `size` vertices.
pub fn within_capacity(size: usize) -> usize {
    size * size.saturating_sub(1) / 2
}

/// `2 d_ii + sum_{j != i} d_ij = n_i d(V_i)` for every class.
pub fn check_degree_feasibility(inst: &JdmInstance) -> bool {
    degree_violations(inst).next().is_none()
}

/// `d_ij <= n_i n_j` for `i < j` and `d_ii <= n_i (n_i - 1) / 2`.
pub fn check_matrix_feasibility(inst: &JdmInstance) -> bool {
    matrix_violations(inst).next().is_none()
}

/// Every violated condition, degree conditions first.
pub fn feasibility_violations(inst: &JdmInstance) -> Vec<Violation> {
    degree_violations(inst).chain(matrix_violations(inst)).collect()
}

/// `Ok` when both feasibility conditions hold.
pub fn ensure_feasible(inst: &JdmInstance) -> Result<()> {
    let violations = feasibility_violations(inst);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::Infeasible(violations))
    }
}

fn degree_violations(inst: &JdmInstance) -> impl Iterator<Item = Violation> + '_ {
    (0..inst.class_count()).filter_map(move |i| {
        let edge_endpoints = inst.matrix[i][i] + inst.matrix[i].iter().sum::<usize>();
        let required = inst.sizes()[i] * inst.degrees[i];
        (edge_endpoints != required).then_some(Violation::DegreeSum {
            class: i,
            edge_endpoints,
            required,
        })
    })
}

fn matrix_violations(inst: &JdmInstance) -> impl Iterator<Item = Violation> + '_ {
    let k = inst.class_count();
    let sizes = inst.sizes();
    (0..k).flat_map(move |i| {
        (i..k).filter_map(move |j| {
            let count = inst.matrix[i][j];
            if i == j {
                let capacity = within_capacity(sizes[i]);
                (count > capacity).then_some(Violation::WithinClassCapacity {
                    class: i,
                    count,
                    capacity,
                })
            } else {
                let capacity = sizes[i] * sizes[j];
                (count > capacity).then_some(Violation::CrossClassCapacity {
                    first: i,
                    second: j,
                    count,
                    capacity,
                })
            }
        })
    })
}
