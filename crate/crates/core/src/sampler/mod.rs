//! Moving between realizations by legal switches.
//!
//! A legal switch keeps every degree and every class-pair count, so it maps
//! the realization set of an instance to itself. The lazy chain in
//! [`ChainState`] accepts a proposed switch from `G` to `G'` with probability
//! `l(G) / (l(G) + l(G'))`, which makes it symmetric and hence uniform at
//! stationarity; [`switch_path`] shows any realization reaches any other.

mod chain;
mod omega;
mod path;
mod switch;

pub use chain::{
    mcmc_step, run_chain, run_chains, transition_matrix, ChainConfig, ChainMetadata, ChainRun,
    ChainState, ChainStats, Histogram, StepOutcome,
};
pub use omega::{
    enumerate_omega, find_connected_realization, for_each_realization, has_realization,
    DEFAULT_OMEGA_CAP,
};
pub use path::{apply_switches, switch_path, PathCase, PathEvent, SwitchPath};
pub use switch::{count_legal_switches, enumerate_legal_switches, SwitchMove};
