//! Instances whose matrix may leave entries unconstrained (`*`).
//!
//! A wildcard entry lets any number of edges run between its two classes,
//! while integer entries stay exact. [`realize_star`] first meets the integer
//! entries with the balanced construction (wildcards read as zero), then
//! tops every vertex up to its class degree using only wildcard pairs, via a
//! perfect matching in [`GadgetGraph`].

mod gadget;
mod matching;

use std::fmt;
use std::sync::Arc;

pub use gadget::{build_matching_gadget, ForbiddenDegreeProblem, GadgetGraph};
pub use matching::{maximum_matching, perfect_matching};

use crate::error::{Error, Result, Violation};
use crate::graph::LabeledGraph;
use crate::instance::{within_capacity, ClassLayout, JdmInstance};
use crate::realizer::BuildState;
use crate::summary::extract_jdm;

/// One matrix entry: an exact edge count or a wildcard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StarEntry {
    Count(usize),
    Any,
}

impl StarEntry {
    pub fn count(self) -> Option<usize> {
        match self {
            StarEntry::Count(c) => Some(c),
            StarEntry::Any => None,
        }
    }
}

impl fmt::Display for StarEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StarEntry::Count(c) => write!(f, "{c}"),
            StarEntry::Any => f.write_str("*"),
        }
    }
}

impl From<usize> for StarEntry {
    fn from(c: usize) -> Self {
        StarEntry::Count(c)
    }
}

/// Classes with degrees and a symmetric matrix of [`StarEntry`]s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarInstance {
    layout: Arc<ClassLayout>,
    degrees: Vec<usize>,
    matrix: Vec<Vec<StarEntry>>,
}

impl StarInstance {
    pub fn new(sizes: Vec<usize>, degrees: Vec<usize>, matrix: Vec<Vec<StarEntry>>) -> Result<Self> {
        Self::from_layout(Arc::new(ClassLayout::new(sizes)?), degrees, matrix)
    }

    pub fn from_layout(
        layout: Arc<ClassLayout>,
        degrees: Vec<usize>,
        matrix: Vec<Vec<StarEntry>>,
    ) -> Result<Self> {
        let k = layout.class_count();
        if degrees.len() != k {
            return Err(Error::InvalidInstance(format!(
                "{} degrees given for {k} classes",
                degrees.len()
            )));
        }
        crate::instance::check_square(&matrix, k)?;
        for i in 0..k {
            for j in i + 1..k {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::InvalidInstance(format!(
                        "matrix is not symmetric: ({i},{j}) is {} but ({j},{i}) is {}",
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

    /// Wraps a plain instance; every entry becomes exact.
    pub fn from_plain(inst: &JdmInstance) -> Self {
        let matrix = inst
            .matrix()
            .iter()
            .map(|row| row.iter().map(|&c| StarEntry::Count(c)).collect())
            .collect();
        Self {
            layout: inst.layout().clone(),
            degrees: inst.degrees().to_vec(),
            matrix,
        }
    }

    /// The plain instance, if no entry is a wildcard.
    pub fn to_plain(&self) -> Option<JdmInstance> {
        let matrix = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|e| e.count()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        JdmInstance::from_layout(self.layout.clone(), self.degrees.clone(), matrix).ok()
    }

    pub fn layout(&self) -> &Arc<ClassLayout> {
        &self.layout
    }

    pub fn class_count(&self) -> usize {
        self.layout.class_count()
    }

    pub fn sizes(&self) -> &[usize] {
        self.layout.sizes()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn matrix(&self) -> &[Vec<StarEntry>] {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> StarEntry {
        self.matrix[i][j]
    }

    pub fn is_wildcard(&self, i: usize, j: usize) -> bool {
        self.matrix[i][j] == StarEntry::Any
    }

    /// The matrix with every wildcard replaced by zero.
    pub fn fixed_matrix(&self) -> Vec<Vec<usize>> {
        self.matrix
            .iter()
            .map(|row| row.iter().map(|e| e.count().unwrap_or(0)).collect())
            .collect()
    }
}

/// Conditions every realization must meet, restricted to what the integer
/// entries pin down:
///
/// * integer entries within class capacities;
/// * rows without wildcards meet the degree sum exactly, rows with
///   wildcards do not exceed it;
/// * degrees below `n` and an even degree total.
pub fn star_violations(inst: &StarInstance) -> Vec<Violation> {
    let k = inst.class_count();
    let n = inst.layout.vertex_count();
    let sizes = inst.sizes();
    let mut out = Vec::new();
    for i in 0..k {
        let row = &inst.matrix[i];
        let fixed: usize = row.iter().filter_map(|e| e.count()).sum();
        let edge_endpoints = fixed + row[i].count().unwrap_or(0);
        let required = sizes[i] * inst.degrees[i];
        let open = row.contains(&StarEntry::Any);
        if edge_endpoints > required || (!open && edge_endpoints != required) {
            out.push(Violation::DegreeSum {
                class: i,
                edge_endpoints,
                required,
            });
        }
    }
    for i in 0..k {
        if inst.degrees[i] >= n {
            out.push(Violation::DegreeBound {
                class: i,
                degree: inst.degrees[i],
                vertices: n,
            });
        }
    }
    let total: usize = (0..k).map(|i| sizes[i] * inst.degrees[i]).sum();
    if total % 2 == 1 {
        out.push(Violation::OddDegreeTotal { total });
    }
    for i in 0..k {
        for j in i..k {
            let Some(count) = inst.matrix[i][j].count() else {
                continue;
            };
            if i == j && count > within_capacity(sizes[i]) {
                out.push(Violation::WithinClassCapacity {
                    class: i,
                    count,
                    capacity: within_capacity(sizes[i]),
                });
            } else if i != j && count > sizes[i] * sizes[j] {
                out.push(Violation::CrossClassCapacity {
                    first: i,
                    second: j,
                    count,
                    capacity: sizes[i] * sizes[j],
                });
            }
        }
    }
    out
}

/// Describes how `g` fails to realize `inst`, if it does.
pub fn star_realization_defect(g: &LabeledGraph, inst: &StarInstance) -> Result<Option<String>> {
    if !g.layout().same_vertex_set(&inst.layout) {
        return Err(Error::VertexSetMismatch(format!(
            "graph has class sizes {:?}, instance has {:?}",
            g.layout().sizes(),
            inst.sizes()
        )));
    }
    for v in 0..g.vertex_count() {
        let want = inst.degrees[g.class_of(v)];
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
            if let StarEntry::Count(c) = inst.matrix[i][j] {
                if summary.matrix[i][j] != c {
                    return Ok(Some(format!(
                        "classes ({i},{j}) carry {} edges, instance requires {c}",
                        summary.matrix[i][j]
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// Whether `g` has the class degrees and meets every integer entry exactly.
pub fn validate_star_realization(g: &LabeledGraph, inst: &StarInstance) -> Result<bool> {
    Ok(star_realization_defect(g, inst)?.is_none())
}

/// The residual problem left after the integer entries are met by `h`:
/// every vertex still needs `d(V_i) - deg_h(u)` edges, all on wildcard pairs.
pub fn residual_problem(inst: &StarInstance, h: &LabeledGraph) -> Result<ForbiddenDegreeProblem> {
    let n = h.vertex_count();
    let mut residuals = Vec::with_capacity(n);
    for v in 0..n {
        let want = inst.degrees[h.class_of(v)];
        let r = want.checked_sub(h.degree(v)).ok_or_else(|| {
            Error::NoRealizationFound(format!(
                "vertex {} already has degree {} > {want} from the integer entries",
                h.vertex_id(v),
                h.degree(v)
            ))
        })?;
        residuals.push(r);
    }
    let forbidden = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| !inst.is_wildcard(h.class_of(a), h.class_of(b)))
                .collect()
        })
        .collect();
    ForbiddenDegreeProblem::new(residuals, forbidden)
}

/// A realization of a wildcard instance.
///
/// Errors with [`Error::Infeasible`] when a necessary condition fails, and
/// with [`Error::NoRealizationFound`] when the gadget has no perfect matching
/// for the residual degrees left by the balanced construction. The latter is
/// a failure of this method; it does not by itself show that no realization
/// exists.
pub fn realize_star(inst: &StarInstance) -> Result<LabeledGraph> {
    let violations = star_violations(inst);
    if !violations.is_empty() {
        return Err(Error::Infeasible(violations));
    }
    let h = BuildState::for_quotas(inst.layout.clone(), inst.fixed_matrix(), None)?.run()?;
    let problem = residual_problem(inst, &h)?;
    let extra = problem.solve()?.ok_or_else(|| {
        Error::NoRealizationFound("the matching gadget has no perfect matching".into())
    })?;
    let mut g = h;
    for (a, b) in extra {
        if !g.insert_edge(a, b) {
            return Err(Error::Internal(format!("wildcard edge ({a},{b}) already present")));
        }
    }
    if let Some(defect) = star_realization_defect(&g, inst)? {
        return Err(Error::Internal(defect));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use StarEntry::{Any, Count};

    #[test]
    fn cross_wildcard() {
        let i = StarInstance::new(
            vec![2, 2],
            vec![1, 1],
            vec![vec![Count(0), Any], vec![Any, Count(0)]],
        )
        .unwrap();
        let g = realize_star(&i).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.edges().all(|(a, b)| g.class_of(a) != g.class_of(b)));
    }

    #[test]
    fn all_wildcards_single_edge() {
        let i = StarInstance::new(vec![1, 1], vec![1, 1], vec![vec![Any, Any], vec![Any, Any]])
            .unwrap();
        assert_eq!(realize_star(&i).unwrap().edge_key(), vec![(0, 1)]);
    }

    #[test]
    fn odd_total_is_infeasible() {
        let i = StarInstance::new(vec![3], vec![1], vec![vec![Any]]).unwrap();
        match realize_star(&i) {
            Err(Error::Infeasible(v)) => {
                assert_eq!(v, vec![Violation::OddDegreeTotal { total: 3 }])
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mixed_entries_are_exact() {
        // Class 0 has an internal matching of one edge; the rest is free.
        let i = StarInstance::new(
            vec![2, 3],
            vec![2, 2],
            vec![vec![Count(1), Any], vec![Any, Any]],
        )
        .unwrap();
        let g = realize_star(&i).unwrap();
        assert!(validate_star_realization(&g, &i).unwrap());
        assert_eq!(extract_jdm(&g).matrix[0][0], 1);
    }

    #[test]
    fn plain_round_trip() {
        let plain = JdmInstance::new(vec![3], vec![2], vec![vec![3]]).unwrap();
        let s = StarInstance::from_plain(&plain);
        assert_eq!(s.to_plain().unwrap(), plain);
        assert_eq!(realize_star(&s).unwrap().edge_count(), 3);
    }

    #[test]
    fn asymmetric_wildcard_rejected() {
        assert!(StarInstance::new(
            vec![1, 1],
            vec![1, 1],
            vec![vec![Count(0), Any], vec![Count(1), Count(0)]],
        )
        .is_err());
    }
}
