//! Graphs with a prescribed joint-degree matrix.
//!
//! An instance fixes a partition of the vertices into classes, one degree
//! per class, and for every pair of classes (including a class with itself)
//! the exact number of edges between them. This crate
//!
//! * decides whether an instance is realizable and builds a realization
//!   ([`simple_realize`], [`balanced_realize`]);
//! * builds a connected realization or a certificate that none exists
//!   ([`realize_connected`]);
//! * handles matrices with unconstrained entries ([`realize_star`]);
//! * samples realizations with a switch chain whose stationary distribution
//!   is uniform ([`run_chain`]) and connects any two realizations by legal
//!   switches ([`switch_path`]).
//!
//! ```
//! use jdm_core::{balanced_realize, validate_realization, JdmInstance};
//!
//! // Three vertices of degree 2 with three edges among them: a triangle.
//! let inst = JdmInstance::new(vec![3], vec![2], vec![vec![3]])?;
//! let g = balanced_realize(&inst, None)?;
//! assert!(validate_realization(&g, &inst)?);
//! assert_eq!(g.edge_count(), 3);
//! # Ok::<(), jdm_core::Error>(())
//! ```

pub mod connected;
pub mod error;
pub mod graph;
pub mod instance;
pub mod io;
pub mod realizer;
pub mod sampler;
pub mod star;
pub mod summary;

pub use connected::{
    contract, evaluate_certificate, realize_connected, verify_certificate, Certificate,
    ConnectedOutcome, ContractedInstance,
};
pub use error::{Error, Result, Violation};
pub use graph::{edge, Edge, LabeledGraph};
pub use instance::{
    check_degree_feasibility, check_matrix_feasibility, ensure_feasible, feasibility_violations,
    ClassLayout, JdmInstance, VertexId,
};
pub use realizer::{balanced_realize, simple_realize, BalancedCase, BuildState};
pub use sampler::{
    enumerate_legal_switches, enumerate_omega, mcmc_step, run_chain, switch_path, ChainConfig,
    ChainState, SwitchMove,
};
pub use star::{realize_star, StarEntry, StarInstance};
pub use summary::{extract_jdm, regroup_by_degree, validate_realization, JdmSummary};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/instances.md")]
    mod instances {}
    #[doc = include_str!("../../../book/src/realizing.md")]
    mod realizing {}
    #[doc = include_str!("../../../book/src/connected.md")]
    mod connected {}
    #[doc = include_str!("../../../book/src/wildcards.md")]
    mod wildcards {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
}
