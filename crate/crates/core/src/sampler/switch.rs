//! Legal switches `[uv, u'v' | uv', u'v]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, LabeledGraph};

/// Removes `uv` and `u'v'`, adds `uv'` and `u'v`, with `u` and `u'` in one
/// class, so every degree and every class-pair count is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SwitchMove {
    pub u: usize,
    pub v: usize,
    pub u2: usize,
    pub v2: usize,
}

impl SwitchMove {
    pub fn new(u: usize, v: usize, u2: usize, v2: usize) -> Self {
        Self { u, v, u2, v2 }
    }

    /// The two removed edges, sorted.
    pub fn removed(&self) -> [Edge; 2] {
        sorted_pair(edge(self.u, self.v), edge(self.u2, self.v2))
    }

    /// The two added edges, sorted.
    pub fn added(&self) -> [Edge; 2] {
        sorted_pair(edge(self.u, self.v2), edge(self.u2, self.v))
    }

    /// Identifies the resulting graph: two legal switches on the same graph
    /// produce the same graph iff their keys are equal.
    pub fn key(&self) -> ([Edge; 2], [Edge; 2]) {
        (self.removed(), self.added())
    }

    /// The switch undoing this one.
    pub fn inverse(&self) -> Self {
        Self::new(self.u, self.v2, self.u2, self.v)
    }

    pub fn is_legal(&self, g: &LabeledGraph) -> bool {
        let Self { u, v, u2, v2 } = *self;
        let n = g.vertex_count();
        [u, v, u2, v2].iter().all(|&x| x < n)
            && u != u2
            && v != v2
            && u != v2
            && u2 != v
            && g.class_of(u) == g.class_of(u2)
            && g.has_edge(u, v)
            && g.has_edge(u2, v2)
            && !g.has_edge(u, v2)
            && !g.has_edge(u2, v)
    }

    /// Applies the switch, or errors if it is not legal on `g`.
    pub fn apply(&self, g: &mut LabeledGraph) -> Result<()> {
        if !self.is_legal(g) {
            return Err(Error::InvalidInstance(format!("{self} is not a legal switch here")));
        }
        self.apply_unchecked(g);
        Ok(())
    }

    pub(crate) fn apply_unchecked(&self, g: &mut LabeledGraph) {
        g.remove_edge(self.u, self.v);
        g.remove_edge(self.u2, self.v2);
        g.insert_edge(self.u, self.v2);
        g.insert_edge(self.u2, self.v);
    }
}

impl fmt::Display for SwitchMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Self { u, v, u2, v2 } = *self;
        write!(f, "[{u}-{v}, {u2}-{v2} | {u}-{v2}, {u2}-{v}]")
    }
}

fn sorted_pair(a: Edge, b: Edge) -> [Edge; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

/// All distinct legal switches of `g`, one per resulting graph, sorted by
/// [`SwitchMove::key`].
///
/// Scans `u < u'` in a class and `v in N(u) \ N(u')`, `v' in N(u') \ N(u)`,
/// so the cost is `O(n^2 D^2)` for maximum degree `D`.
pub fn enumerate_legal_switches(g: &LabeledGraph) -> Vec<SwitchMove> {
    let layout = g.layout();
    let mut out = Vec::new();
    let mut only_u = Vec::new();
    let mut only_u2 = Vec::new();
    for class in 0..layout.class_count() {
        let members = layout.members(class);
        for u in members.clone() {
            for u2 in u + 1..members.end {
                difference(g.neighbors(u), g.neighbors(u2), u2, &mut only_u);
                if only_u.is_empty() {
                    continue;
                }
                difference(g.neighbors(u2), g.neighbors(u), u, &mut only_u2);
                for &v in &only_u {
                    for &v2 in &only_u2 {
                        out.push(SwitchMove::new(u, v, u2, v2));
                    }
                }
            }
        }
    }
    // The same switch shows up again as `(v, u, v', u')` when `v` and `v'`
    // share a class.
    out.sort_unstable_by_key(SwitchMove::key);
    out.dedup_by_key(|m| m.key());
    out
}

/// Number of distinct legal switches, `l(G)`.
pub fn count_legal_switches(g: &LabeledGraph) -> usize {
    enumerate_legal_switches(g).len()
}

/// `a \ b \ {skip}` for sorted slices.
fn difference(a: &[usize], b: &[usize], skip: usize, out: &mut Vec<usize>) {
    out.clear();
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if x != skip && (j == b.len() || b[j] != x) {
            out.push(x);
        }
    }
}
