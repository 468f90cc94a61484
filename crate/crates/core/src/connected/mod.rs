//! Connected realizations and certificates of their non-existence.
//!
//! The pipeline is:
//!
//! 1. [`contract`] the instance: class `i` shrinks to `max(1, n_i - d_ii)`
//!    vertices (the fewest components its induced subgraph can have) and the
//!    cross-class capacities are capped accordingly;
//! 2. [`valid_tree_construction`] either finds a spanning tree of the
//!    contracted vertex set within those capacities or returns a
//!    [`Certificate`] that no connected realization exists;
//! 3. [`expand_tree`] hangs a path of the missing vertices off each class;
//! 4. [`balance_tree`] evens out degrees inside every class without changing
//!    any class-pair count;
//! 5. the balanced tree seeds [`balanced_realize`], which never increases the
//!    number of components, so the result is connected.

mod certificate;
mod expand;
mod tree;

use std::sync::Arc;

use serde::Serialize;

pub use certificate::{evaluate_certificate, verify_certificate, CertificateEvaluation, CertNode};
pub use expand::{balance_tree, expand_tree, BalancedTree};
pub use tree::{valid_tree_construction, TreeOutcome, TreeSearchStats};

use crate::error::Result;
use crate::graph::LabeledGraph;
use crate::instance::{ensure_feasible, ClassLayout, JdmInstance};
use crate::realizer::balanced_realize;

/// The contracted instance `(V~, D~)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractedInstance {
    layout: Arc<ClassLayout>,
    matrix: Vec<Vec<usize>>,
}

impl ContractedInstance {
    /// Layout of the contracted vertex set; class names are inherited.
    pub fn layout(&self) -> &Arc<ClassLayout> {
        &self.layout
    }

    pub fn sizes(&self) -> &[usize] {
        self.layout.sizes()
    }

    /// Capacities `d~_ij`; the diagonal is zero.
    pub fn matrix(&self) -> &[Vec<usize>] {
        &self.matrix
    }

    pub fn vertex_count(&self) -> usize {
        self.layout.vertex_count()
    }
}

/// `|V~_i| = max(1, n_i - d_ii)`, `d~_ii = 0`, `d~_ij = min(|V~_i| |V~_j|, d_ij)`.
pub fn contract(inst: &JdmInstance) -> ContractedInstance {
    let k = inst.class_count();
    let sizes: Vec<usize> = (0..k)
        .map(|i| inst.sizes()[i].saturating_sub(inst.entry(i, i)).max(1))
        .collect();
    let matrix = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        0
                    } else {
                        (sizes[i] * sizes[j]).min(inst.entry(i, j))
                    }
                })
                .collect()
        })
        .collect();
    let layout = ClassLayout::with_names(inst.layout().names().to_vec(), sizes)
        .expect("contracted classes are non-empty");
    ContractedInstance {
        layout: Arc::new(layout),
        matrix,
    }
}

/// A spanning tree of the contracted vertex set within the capacities `d~`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidTree {
    pub tree: LabeledGraph,
}

/// A class subset `F` and a partition `A` of it, witnessing that no
/// connected realization exists.
///
/// Classes are identified by index; `groups` partitions `family`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub family: Vec<usize>,
    pub groups: Vec<Vec<usize>>,
}

/// Result of [`realize_connected`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConnectedOutcome {
    Connected(LabeledGraph),
    NoConnectedRealization(Certificate),
}

/// A connected realization of `inst`, or a certificate that none exists.
///
/// Errors when `inst` is not feasible.
pub fn realize_connected(inst: &JdmInstance) -> Result<ConnectedOutcome> {
    ensure_feasible(inst)?;
    let contracted = contract(inst);
    let (outcome, _) = valid_tree_construction(&contracted)?;
    match outcome {
        TreeOutcome::Certificate(cert) => Ok(ConnectedOutcome::NoConnectedRealization(cert)),
        TreeOutcome::Tree(valid) => {
            let spanning = expand_tree(&valid, inst)?;
            let balanced = balance_tree(&spanning, inst)?;
            let g = balanced_realize(inst, Some(balanced.tree))?;
            Ok(ConnectedOutcome::Connected(g))
        }
    }
}
