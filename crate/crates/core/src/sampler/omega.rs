//! Exhaustive listing of all realizations of small instances.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::instance::{feasibility_violations, JdmInstance};

/// Default largest vertex count [`enumerate_omega`] accepts.
pub const DEFAULT_OMEGA_CAP: usize = 10;

/// Every realization of `inst`, sorted. Empty for infeasible instances.
///
/// Errors with [`Error::CapExceeded`] when `inst` has more than `cap`
/// vertices.
pub fn enumerate_omega(inst: &JdmInstance, cap: usize) -> Result<Vec<LabeledGraph>> {
    let mut out = Vec::new();
    for_each_realization(inst, cap, |g| {
        out.push(g.clone());
        ControlFlow::Continue(())
    })?;
    out.sort();
    Ok(out)
}

/// Whether `inst` has any realization, by search.
pub fn has_realization(inst: &JdmInstance, cap: usize) -> Result<bool> {
    let mut found = false;
    for_each_realization(inst, cap, |_| {
        found = true;
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Some connected realization of `inst`, by search.
pub fn find_connected_realization(inst: &JdmInstance, cap: usize) -> Result<Option<LabeledGraph>> {
    let mut found = None;
    for_each_realization(inst, cap, |g| {
        if g.is_connected() {
            found = Some(g.clone());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

/// Calls `visit` on every realization until it breaks.
///
/// Vertices are completed in order: vertex `u` picks all of its remaining
/// neighbors among the later vertices at once, within the degree and
/// class-pair budgets left.
pub fn for_each_realization(
    inst: &JdmInstance,
    cap: usize,
    mut visit: impl FnMut(&LabeledGraph) -> ControlFlow<()>,
) -> Result<()> {
    let n = inst.vertex_count();
    if n > cap {
        return Err(Error::CapExceeded { vertices: n, cap });
    }
    if !feasibility_violations(inst).is_empty() {
        return Ok(());
    }
    let layout = inst.layout().clone();
    let mut search = Search {
        need: (0..n).map(|v| inst.degree(layout.class_of(v))).collect(),
        quota: inst.matrix().to_vec(),
        graph: LabeledGraph::empty(layout),
        visit: &mut visit,
    };
    let _ = search.vertex(0);
    Ok(())
}

struct Search<'a, F> {
    need: Vec<usize>,
    quota: Vec<Vec<usize>>,
    graph: LabeledGraph,
    visit: &'a mut F,
}

impl<F: FnMut(&LabeledGraph) -> ControlFlow<()>> Search<'_, F> {
    fn vertex(&mut self, u: usize) -> ControlFlow<()> {
        let n = self.need.len();
        if u == n {
            return if self.quota.iter().flatten().all(|&q| q == 0) {
                (self.visit)(&self.graph)
            } else {
                ControlFlow::Continue(())
            };
        }
        let candidates: Vec<usize> = (u + 1..n).filter(|&v| self.need[v] > 0).collect();
        if candidates.len() < self.need[u] {
            return ControlFlow::Continue(());
        }
        self.choose(u, &candidates, 0)
    }

    /// Picks the remaining neighbors of `u` from `candidates[from..]`.
    fn choose(&mut self, u: usize, candidates: &[usize], from: usize) -> ControlFlow<()> {
        if self.need[u] == 0 {
            return self.vertex(u + 1);
        }
        if candidates.len() - from < self.need[u] {
            return ControlFlow::Continue(());
        }
        let cu = self.graph.class_of(u);
        for i in from..candidates.len() {
            if candidates.len() - i < self.need[u] {
                break;
            }
            let v = candidates[i];
            let cv = self.graph.class_of(v);
            if self.quota[cu][cv] == 0 {
                continue;
            }
            self.take(u, v, cu, cv);
            let flow = self.choose(u, candidates, i + 1);
            self.give_back(u, v, cu, cv);
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn take(&mut self, u: usize, v: usize, cu: usize, cv: usize) {
        self.graph.insert_edge(u, v);
        self.need[u] -= 1;
        self.need[v] -= 1;
        self.quota[cu][cv] -= 1;
        if cu != cv {
            self.quota[cv][cu] -= 1;
        }
    }

    fn give_back(&mut self, u: usize, v: usize, cu: usize, cv: usize) {
        self.graph.remove_edge(u, v);
        self.need[u] += 1;
        self.need[v] += 1;
        self.quota[cu][cv] += 1;
        if cu != cv {
            self.quota[cv][cu] += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(sizes: &[usize], degrees: &[usize], matrix: &[&[usize]]) -> JdmInstance {
        JdmInstance::new(
            sizes.to_vec(),
            degrees.to_vec(),
            matrix.iter().map(|r| r.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn known_counts() {
        assert_eq!(enumerate_omega(&inst(&[4], &[2], &[&[4]]), 10).unwrap().len(), 3);
        assert_eq!(enumerate_omega(&inst(&[6], &[2], &[&[6]]), 10).unwrap().len(), 70);
        assert!(enumerate_omega(&inst(&[3], &[1], &[&[2]]), 10).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_omega(&inst(&[11], &[0], &[&[0]]), 10),
            Err(Error::CapExceeded { vertices: 11, cap: 10 })
        ));
    }

    #[test]
    fn connected_search() {
        let two_triangles = inst(&[3, 3], &[2, 2], &[&[3, 0], &[0, 3]]);
        assert!(has_realization(&two_triangles, 10).unwrap());
        assert!(find_connected_realization(&two_triangles, 10).unwrap().is_none());
        let hexagon = inst(&[6], &[2], &[&[6]]);
        assert!(find_connected_realization(&hexagon, 10).unwrap().unwrap().is_connected());
    }
}
