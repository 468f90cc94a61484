//! Degree sequences with forbidden pairs, solved through perfect matchings.
//!
//! For vertex `i` with target degree `r_i` the gadget has one *slot* `v_ij`
//! per other vertex `j` and `n - r_i - 1` *enforcers*. Every slot of `i` is
//! joined to every enforcer of `i`, and `v_ij` is joined to `v_ji` when `ij`
//! is allowed. A perfect matching leaves exactly `r_i` slots of `i` for the
//! `v_ij v_ji` edges, which are the edges of the realization.

use crate::error::{Error, Result};
use crate::graph::{edge, Edge};

use super::matching::perfect_matching;

/// Find a simple graph on `0..n` with degrees `residuals` that avoids every
/// `forbidden` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenDegreeProblem {
    residuals: Vec<usize>,
    forbidden: Vec<Vec<bool>>,
}

impl ForbiddenDegreeProblem {
    /// `forbidden` must be a symmetric `n x n` matrix; its diagonal is ignored.
    pub fn new(residuals: Vec<usize>, forbidden: Vec<Vec<bool>>) -> Result<Self> {
        let n = residuals.len();
        crate::instance::check_square(&forbidden, n)?;
        for i in 0..n {
            for j in i + 1..n {
                if forbidden[i][j] != forbidden[j][i] {
                    return Err(Error::InvalidInstance(format!(
                        "forbidden pairs are not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self {
            residuals,
            forbidden,
        })
    }

    /// Builds the problem from a list of forbidden pairs.
    pub fn from_pairs(residuals: Vec<usize>, pairs: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let n = residuals.len();
        let mut forbidden = vec![vec![false; n]; n];
        for (a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::InvalidInstance(format!("pair ({a},{b}) outside 0..{n}")));
            }
            forbidden[a][b] = true;
            forbidden[b][a] = true;
        }
        Self::new(residuals, forbidden)
    }

    pub fn vertex_count(&self) -> usize {
        self.residuals.len()
    }

    pub fn residuals(&self) -> &[usize] {
        &self.residuals
    }

    pub fn is_forbidden(&self, a: usize, b: usize) -> bool {
        a == b || self.forbidden[a][b]
    }

    /// The edges of a realization, or `None` if there is none.
    ///
    /// Errors when some residual is at least `n`.
    pub fn solve(&self) -> Result<Option<Vec<Edge>>> {
        let gadget = build_matching_gadget(self)?;
        Ok(gadget.realization())
    }
}

/// The matching gadget of a [`ForbiddenDegreeProblem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetGraph {
    n: usize,
    vertex_count: usize,
    edges: Vec<Edge>,
    enforcer_starts: Vec<usize>,
}

impl GadgetGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Sorted gadget edges.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Index of slot `v_ij`, for `i != j`.
    pub fn slot(&self, i: usize, j: usize) -> usize {
        assert_ne!(i, j, "no slot v_ii");
        i * (self.n - 1) + if j < i { j } else { j - 1 }
    }

    /// Indices of the enforcers of vertex `i`.
    pub fn enforcers(&self, i: usize) -> std::ops::Range<usize> {
        self.enforcer_starts[i]..self.enforcer_starts[i + 1]
    }

    /// Realization read off a perfect matching, if one exists.
    pub fn realization(&self) -> Option<Vec<Edge>> {
        let matching = perfect_matching(self.vertex_count, &self.edges)?;
        let slots = self.n * self.n.saturating_sub(1);
        let mut out: Vec<Edge> = matching
            .into_iter()
            .filter(|&(a, b)| a < slots && b < slots)
            .map(|(a, b)| edge(a / (self.n - 1), b / (self.n - 1)))
            .collect();
        out.sort_unstable();
        Some(out)
    }
}

/// Builds the gadget. Errors when some residual is at least `n`, since then
/// vertex `i` would need a negative number of enforcers.
pub fn build_matching_gadget(p: &ForbiddenDegreeProblem) -> Result<GadgetGraph> {
    let n = p.vertex_count();
    if let Some(i) = (0..n).find(|&i| p.residuals[i] >= n) {
        return Err(Error::Infeasible(vec![crate::error::Violation::DegreeBound {
            class: i,
            degree: p.residuals[i],
            vertices: n,
        }]));
    }
    let slots = n * n.saturating_sub(1);
    let mut enforcer_starts = Vec::with_capacity(n + 1);
    let mut next = slots;
    for i in 0..n {
        enforcer_starts.push(next);
        next += n - p.residuals[i] - 1;
    }
    enforcer_starts.push(next);
    let mut gadget = GadgetGraph {
        n,
        vertex_count: next,
        edges: Vec::new(),
        enforcer_starts,
    };
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let s = gadget.slot(i, j);
            if i < j && !p.is_forbidden(i, j) {
                edges.push(edge(s, gadget.slot(j, i)));
            }
            edges.extend(gadget.enforcers(i).map(|e| edge(s, e)));
        }
    }
    edges.sort_unstable();
    gadget.edges = edges;
    Ok(gadget)
}
