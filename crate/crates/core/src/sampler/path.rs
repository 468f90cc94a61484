//! A sequence of legal switches between any two realizations.
//!
//! Edges of the working graph `G` and the working target `T` are *straight*
//! (`G` only), *squiggly* (`T` only), *dashed* (both) or *dotted* (neither);
//! `X` is the set of straight and squiggly edges. A *pairing node* `x` has a
//! straight edge `xs` and a squiggly edge `xq` with `s` and `q` in one class.
//!
//! * With a pairing node, one switch either in `G` or in `T` shrinks `|X|`
//!   by 2 or 4 (Cases 1a, 1b on `G`, 1c on `T`). Counting the `G`- and
//!   `T`-neighbors of `s` and `q` shows that some such switch always exists.
//! * Without one, a squiggly `xu` and a straight `yv` with `x, y` and `u, v`
//!   in matching classes are rewired so that `x` becomes a pairing node
//!   (Cases 2a, 2b, 2c), and Case 1 follows until `|X|` drops.
//!
//! Switches made on `T` are undone at the end: their inverses are appended
//! in reverse order.

use serde::Serialize;

use super::switch::SwitchMove;
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::summary::extract_jdm;

/// Which rule produced a switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PathCase {
    OneA,
    OneB,
    OneC,
    TwoA,
    TwoB,
    TwoC,
}

/// One switch made by the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathEvent {
    pub case: PathCase,
    /// Whether the switch was made on the target rather than the source side.
    pub on_target: bool,
    pub pivot: usize,
    pub switch: SwitchMove,
    pub difference_before: usize,
    pub difference_after: usize,
}

/// The output of [`switch_path`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwitchPath {
    /// Switches taking the source to the target, in order.
    pub moves: Vec<SwitchMove>,
    pub trace: Vec<PathEvent>,
    /// `|E(X)|` between the two inputs.
    pub initial_difference: usize,
    /// `5 |E(X)| + 10`.
    pub budget: usize,
}

impl SwitchPath {
    pub fn within_budget(&self) -> bool {
        self.moves.len() <= self.budget
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Straight,
    Squiggly,
    Dashed,
    Dotted,
}

struct Walk {
    g: LabeledGraph,
    t: LabeledGraph,
    forward: Vec<SwitchMove>,
    on_target: Vec<SwitchMove>,
    trace: Vec<PathEvent>,
    difference: usize,
}

impl Walk {
    fn kind(&self, a: usize, b: usize) -> Kind {
        match (self.g.has_edge(a, b), self.t.has_edge(a, b)) {
            (true, false) => Kind::Straight,
            (false, true) => Kind::Squiggly,
            (true, true) => Kind::Dashed,
            (false, false) => Kind::Dotted,
        }
    }

    fn straight(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.g.neighbors(x).iter().copied().filter(move |&s| !self.t.has_edge(x, s))
    }

    fn squiggly(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.t.neighbors(x).iter().copied().filter(move |&q| !self.g.has_edge(x, q))
    }

    /// Change of `|X|` if `m` is applied to `G`.
    fn delta_source(&self, m: &SwitchMove) -> i64 {
        let removed: i64 = m
            .removed()
            .iter()
            .map(|&(a, b)| if self.kind(a, b) == Kind::Straight { -1 } else { 1 })
            .sum();
        let added: i64 = m
            .added()
            .iter()
            .map(|&(a, b)| if self.kind(a, b) == Kind::Squiggly { -1 } else { 1 })
            .sum();
        removed + added
    }

    /// Change of `|X|` if `m` is applied to `T`.
    fn delta_target(&self, m: &SwitchMove) -> i64 {
        let removed: i64 = m
            .removed()
            .iter()
            .map(|&(a, b)| if self.kind(a, b) == Kind::Squiggly { -1 } else { 1 })
            .sum();
        let added: i64 = m
            .added()
            .iter()
            .map(|&(a, b)| if self.kind(a, b) == Kind::Straight { -1 } else { 1 })
            .sum();
        removed + added
    }

    fn record(&mut self, case: PathCase, on_target: bool, pivot: usize, m: SwitchMove) -> Result<()> {
        let delta = if on_target {
            self.delta_target(&m)
        } else {
            self.delta_source(&m)
        };
        let side = if on_target { &mut self.t } else { &mut self.g };
        m.apply(side)
            .map_err(|e| Error::Internal(format!("switch path: {e}")))?;
        if on_target {
            self.on_target.push(m);
        } else {
            self.forward.push(m);
        }
        let before = self.difference;
        self.difference = usize::try_from(before as i64 + delta)
            .map_err(|_| Error::Internal("negative symmetric difference".into()))?;
        self.trace.push(PathEvent {
            case,
            on_target,
            pivot,
            switch: m,
            difference_before: before,
            difference_after: self.difference,
        });
        Ok(())
    }

    /// Smallest pairing node `x`, with its smallest `(s, q)`.
    fn pairing_node(&self) -> Option<(usize, usize, usize)> {
        (0..self.g.vertex_count()).find_map(|x| self.pairing_at(x).map(|(s, q)| (x, s, q)))
    }

    fn pairing_at(&self, x: usize) -> Option<(usize, usize)> {
        self.straight(x).find_map(|s| {
            self.squiggly(x)
                .find(|&q| self.g.class_of(q) == self.g.class_of(s))
                .map(|q| (s, q))
        })
    }

    /// Case 1 at pairing node `x` with straight `xs` and squiggly `xq`.
    ///
    /// On `G`: `[sx, qw | sw, qx]` for `w` adjacent to `q` but not `s`.
    /// On `T`: `[qx, sw | qw, sx]` for `w` adjacent to `s` but not `q`.
    /// The switch shrinking `|X|` most is taken, `G` first on ties.
    fn case_one(&mut self, x: usize, s: usize, q: usize) -> Result<()> {
        let source = self
            .g
            .neighbors(q)
            .iter()
            .copied()
            .filter(|&w| w != s && w != x && !self.g.has_edge(s, w))
            .map(|w| SwitchMove::new(s, x, q, w))
            .map(|m| (self.delta_source(&m), false, m));
        let target = self
            .t
            .neighbors(s)
            .iter()
            .copied()
            .filter(|&w| w != q && w != x && !self.t.has_edge(q, w))
            .map(|w| SwitchMove::new(q, x, s, w))
            .map(|m| (self.delta_target(&m), true, m));
        let best = source
            .chain(target)
            .min_by_key(|&(delta, on_target, _)| (delta, on_target))
            .filter(|&(delta, _, _)| delta < 0)
            .ok_or_else(|| {
                Error::Internal(format!("pairing node {x} admits no shrinking switch"))
            })?;
        let (delta, on_target, m) = best;
        let case = match (on_target, delta) {
            (true, _) => PathCase::OneC,
            (false, d) if d <= -4 => PathCase::OneA,
            (false, _) => PathCase::OneB,
        };
        self.record(case, on_target, x, m)
    }

    /// Case 2: no pairing node. Returns the vertex that became a pairing
    /// node, with its `(s, q)`, and a second pairing node to try if the
    /// first does not suffice.
    fn case_two(&mut self) -> Result<((usize, usize, usize), Option<(usize, usize, usize)>)> {
        let n = self.g.vertex_count();
        let class = |v: usize| self.g.class_of(v);
        let mut pick = None;
        'search: for x in 0..n {
            for u in self.squiggly(x) {
                for y in (0..n).filter(|&y| y != x && y != u && class(y) == class(x)) {
                    if let Some(v) = self
                        .straight(y)
                        .find(|&v| v != x && v != u && class(v) == class(u))
                    {
                        pick = Some((x, u, y, v));
                        break 'search;
                    }
                }
            }
        }
        let (x, u, y, v) = pick.ok_or_else(|| {
            Error::Internal("no pairing node and no matching straight/squiggly pair".into())
        })?;
        match self.kind(x, v) {
            Kind::Dotted => {
                // [xw, yv | xv, yw] on G for w adjacent to x but not y.
                let w = self
                    .g
                    .neighbors(x)
                    .iter()
                    .copied()
                    .find(|&w| w != y && !self.g.has_edge(y, w))
                    .ok_or_else(|| Error::Internal(format!("no switch partner for {x}")))?;
                let case = match (self.kind(x, w), self.kind(y, w)) {
                    (Kind::Dashed, Kind::Dotted) => PathCase::TwoC,
                    (Kind::Dashed, _) => PathCase::TwoB,
                    _ => PathCase::TwoA,
                };
                self.record(case, false, x, SwitchMove::new(x, w, y, v))?;
                Ok(((x, v, u), Some((w, y, x))))
            }
            Kind::Dashed => {
                // Mirror image on T: [yw, xv | yv, xw] for w adjacent to y
                // but not x in T.
                let w = self
                    .t
                    .neighbors(y)
                    .iter()
                    .copied()
                    .find(|&w| w != x && !self.t.has_edge(x, w))
                    .ok_or_else(|| Error::Internal(format!("no target partner for {y}")))?;
                let case = match (self.kind(y, w), self.kind(x, w)) {
                    (Kind::Dashed, Kind::Dotted) => PathCase::TwoC,
                    (Kind::Dashed, _) => PathCase::TwoB,
                    _ => PathCase::TwoA,
                };
                self.record(case, true, y, SwitchMove::new(y, w, x, v))?;
                Ok(((x, v, u), Some((w, y, x))))
            }
            kind => Err(Error::Internal(format!(
                "edge ({x},{v}) is {kind:?} although no pairing node exists"
            ))),
        }
    }
}

/// A sequence of legal switches taking `g0` to `g1`.
///
/// Both graphs must have the same classes, be class-regular (every class has
/// a single degree) and have the same class-pair counts; otherwise
/// [`Error::NotARealization`] or [`Error::VertexSetMismatch`].
pub fn switch_path(g0: &LabeledGraph, g1: &LabeledGraph) -> Result<SwitchPath> {
    if !g0.layout().same_vertex_set(g1.layout()) {
        return Err(Error::VertexSetMismatch(format!(
            "class sizes {:?} and {:?} differ",
            g0.layout().sizes(),
            g1.layout().sizes()
        )));
    }
    let (s0, s1) = (extract_jdm(g0), extract_jdm(g1));
    if !s0.is_class_regular() || !s1.is_class_regular() {
        return Err(Error::NotARealization(
            "both graphs must give every vertex of a class the same degree".into(),
        ));
    }
    if s0.class_degrees != s1.class_degrees || s0.matrix != s1.matrix {
        return Err(Error::NotARealization(
            "the graphs realize different instances".into(),
        ));
    }
    let initial_difference = g0.edges().filter(|&(a, b)| !g1.has_edge(a, b)).count()
        + g1.edges().filter(|&(a, b)| !g0.has_edge(a, b)).count();
    let mut walk = Walk {
        g: g0.clone(),
        t: g1.clone(),
        forward: Vec::new(),
        on_target: Vec::new(),
        trace: Vec::new(),
        difference: initial_difference,
    };
    while walk.difference > 0 {
        let before = walk.difference;
        if let Some((x, s, q)) = walk.pairing_node() {
            walk.case_one(x, s, q)?;
        } else {
            let (first, second) = walk.case_two()?;
            let (x, s, q) = first;
            if walk.kind(x, s) == Kind::Straight && walk.kind(x, q) == Kind::Squiggly {
                walk.case_one(x, s, q)?;
            }
            let mut extra = second.into_iter();
            while walk.difference >= before {
                let next = extra
                    .next()
                    .filter(|&(w, s, q)| {
                        walk.kind(w, s) == Kind::Straight
                            && walk.kind(w, q) == Kind::Squiggly
                            && walk.g.class_of(s) == walk.g.class_of(q)
                    })
                    .or_else(|| walk.pairing_node());
                let (w, s, q) = next.ok_or_else(|| {
                    Error::Internal("rewiring left no pairing node to continue from".into())
                })?;
                walk.case_one(w, s, q)?;
            }
        }
        if walk.difference >= before {
            return Err(Error::Internal(format!(
                "symmetric difference did not shrink ({before} -> {})",
                walk.difference
            )));
        }
    }
    if walk.g != walk.t {
        return Err(Error::Internal("working graphs differ with empty difference".into()));
    }
    let mut moves = walk.forward;
    moves.extend(walk.on_target.iter().rev().map(SwitchMove::inverse));
    Ok(SwitchPath {
        moves,
        trace: walk.trace,
        initial_difference,
        budget: 5 * initial_difference + 10,
    })
}

/// Applies `moves` to `g`, checking each is legal at its turn.
pub fn apply_switches(g: &LabeledGraph, moves: &[SwitchMove]) -> Result<LabeledGraph> {
    let mut h = g.clone();
    for (i, m) in moves.iter().enumerate() {
        m.apply(&mut h)
            .map_err(|e| Error::InvalidInstance(format!("switch {i}: {e}")))?;
    }
    Ok(h)
}
