//! The lazy Metropolis chain over realizations.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::switch::{enumerate_legal_switches, SwitchMove};
use crate::error::{Error, Result};
use crate::graph::{Edge, LabeledGraph};
use crate::instance::JdmInstance;
use crate::summary::ensure_realization;

/// What one step did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    /// The lazy half: stayed put.
    Lazy,
    /// The graph has no legal switch.
    Stuck,
    Rejected(SwitchMove),
    Accepted(SwitchMove),
}

/// Counters over a run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ChainStats {
    pub steps: u64,
    pub lazy: u64,
    pub proposals: u64,
    pub accepted: u64,
    pub min_switches: usize,
    pub max_switches: usize,
    /// Sum of `l(G)` over the visited states, one term per step.
    pub switch_sum: u128,
}

/// A chain position with its own generator.
#[derive(Debug, Clone)]
pub struct ChainState {
    graph: LabeledGraph,
    switches: Vec<SwitchMove>,
    seed: u64,
    rng: ChaCha8Rng,
    stats: ChainStats,
}

impl ChainState {
    /// Starts at `graph`; `seed` fixes the whole trajectory.
    pub fn new(graph: LabeledGraph, seed: u64) -> Self {
        let switches = enumerate_legal_switches(&graph);
        let stats = ChainStats {
            min_switches: switches.len(),
            max_switches: switches.len(),
            ..ChainStats::default()
        };
        Self {
            graph,
            switches,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            stats,
        }
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn into_graph(self) -> LabeledGraph {
        self.graph
    }

    /// `l(G)` of the current graph.
    pub fn legal_switch_count(&self) -> usize {
        self.switches.len()
    }

    /// The distinct legal switches of the current graph.
    pub fn switches(&self) -> &[SwitchMove] {
        &self.switches
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stats(&self) -> &ChainStats {
        &self.stats
    }

    /// One step: with probability 1/2 stay; otherwise propose a uniform
    /// distinct legal switch, giving `G'`, and move with probability
    /// `l(G) / (l(G) + l(G'))`.
    pub fn step(&mut self) -> StepOutcome {
        let outcome = self.transition();
        let l = self.switches.len();
        self.stats.steps += 1;
        self.stats.min_switches = self.stats.min_switches.min(l);
        self.stats.max_switches = self.stats.max_switches.max(l);
        self.stats.switch_sum += l as u128;
        outcome
    }

    fn transition(&mut self) -> StepOutcome {
        if self.rng.gen_bool(0.5) {
            self.stats.lazy += 1;
            return StepOutcome::Lazy;
        }
        let l = self.switches.len();
        if l == 0 {
            return StepOutcome::Stuck;
        }
        self.stats.proposals += 1;
        let m = self.switches[self.rng.gen_range(0..l)];
        let mut next = self.graph.clone();
        m.apply_unchecked(&mut next);
        let next_switches = enumerate_legal_switches(&next);
        if self.rng.gen_range(0..l + next_switches.len()) < l {
            self.graph = next;
            self.switches = next_switches;
            self.stats.accepted += 1;
            StepOutcome::Accepted(m)
        } else {
            StepOutcome::Rejected(m)
        }
    }
}

/// Advances `state` by one step of the chain.
pub fn mcmc_step(state: &mut ChainState) -> StepOutcome {
    state.step()
}

/// Visit counts keyed by the canonical edge list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Histogram {
    pub counts: BTreeMap<Vec<Edge>, u64>,
}

impl Histogram {
    pub fn record(&mut self, g: &LabeledGraph) {
        *self.counts.entry(g.edge_key()).or_insert(0) += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Adds the counts of `other`; merging is associative and commutative.
    pub fn merge(&mut self, other: &Histogram) {
        for (key, &c) in &other.counts {
            *self.counts.entry(key.clone()).or_insert(0) += c;
        }
    }

    /// Total variation distance from the uniform distribution on `states`.
    /// Visits to graphs outside `states` count fully against it.
    pub fn total_variation_to_uniform(&self, states: &[LabeledGraph]) -> f64 {
        let total = self.total() as f64;
        if total == 0.0 || states.is_empty() {
            return if states.is_empty() && total == 0.0 { 0.0 } else { 1.0 };
        }
        let p = 1.0 / states.len() as f64;
        let mut keys: Vec<Vec<Edge>> = states.iter().map(LabeledGraph::edge_key).collect();
        keys.sort();
        keys.dedup();
        let mut distance = 0.0;
        for key in &keys {
            let q = self.counts.get(key).copied().unwrap_or(0) as f64 / total;
            distance += (q - p).abs();
        }
        for (key, &c) in &self.counts {
            if keys.binary_search(key).is_err() {
                distance += c as f64 / total;
            }
        }
        distance / 2.0
    }
}

/// Settings for [`run_chain`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainConfig {
    pub steps: u64,
    pub seed: u64,
    pub histogram: bool,
}

/// Summary of a run, as reported alongside its output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainMetadata {
    pub seed: u64,
    pub steps: u64,
    pub lazy_steps: u64,
    pub proposals: u64,
    pub accepted: u64,
    /// Accepted over proposed switches; zero without proposals.
    pub acceptance_rate: f64,
    pub initial_switches: usize,
    pub final_switches: usize,
    pub min_switches: usize,
    pub max_switches: usize,
    pub mean_switches: f64,
}

#[derive(Debug, Clone)]
pub struct ChainRun {
    pub graph: LabeledGraph,
    pub metadata: ChainMetadata,
    /// Visits after each step, if requested.
    pub histogram: Option<Histogram>,
}

/// Runs the chain from `g0`, which must realize `inst`.
pub fn run_chain(inst: &JdmInstance, g0: &LabeledGraph, config: ChainConfig) -> Result<ChainRun> {
    ensure_realization(g0, inst)?;
    let mut state = ChainState::new(g0.clone(), config.seed);
    let initial_switches = state.legal_switch_count();
    let mut histogram = config.histogram.then(Histogram::default);
    for _ in 0..config.steps {
        state.step();
        if let Some(h) = histogram.as_mut() {
            h.record(state.graph());
        }
    }
    let stats = state.stats().clone();
    let metadata = ChainMetadata {
        seed: config.seed,
        steps: stats.steps,
        lazy_steps: stats.lazy,
        proposals: stats.proposals,
        accepted: stats.accepted,
        acceptance_rate: if stats.proposals == 0 {
            0.0
        } else {
            stats.accepted as f64 / stats.proposals as f64
        },
        initial_switches,
        final_switches: state.legal_switch_count(),
        min_switches: stats.min_switches,
        max_switches: stats.max_switches,
        mean_switches: if stats.steps == 0 {
            initial_switches as f64
        } else {
            stats.switch_sum as f64 / stats.steps as f64
        },
    };
    Ok(ChainRun {
        graph: state.into_graph(),
        metadata,
        histogram,
    })
}

/// Runs one chain per seed on separate threads and merges their histograms.
pub fn run_chains(
    inst: &JdmInstance,
    g0: &LabeledGraph,
    steps: u64,
    seeds: &[u64],
    histogram: bool,
) -> Result<(Vec<ChainRun>, Option<Histogram>)> {
    ensure_realization(g0, inst)?;
    let runs: Vec<Result<ChainRun>> = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .iter()
            .map(|&seed| {
                scope.spawn(move || {
                    run_chain(
                        inst,
                        g0,
                        ChainConfig {
                            steps,
                            seed,
                            histogram,
                        },
                    )
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(Error::Internal("chain thread panicked".into())))
            })
            .collect()
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let merged = histogram.then(|| {
        let mut all = Histogram::default();
        for run in &runs {
            if let Some(h) = &run.histogram {
                all.merge(h);
            }
        }
        all
    });
    Ok((runs, merged))
}

/// The exact transition matrix of the chain on `states`, which must be
/// closed under legal switches (e.g. all of a realization set).
///
/// `P(x, y) = 1/2 * 1/l(x) * l(x) / (l(x) + l(y))` for each distinct switch
/// from `x` to `y`; the diagonal takes the rest.
pub fn transition_matrix(states: &[LabeledGraph]) -> Result<Vec<Vec<f64>>> {
    let mut index = BTreeMap::new();
    for (i, g) in states.iter().enumerate() {
        if index.insert(g.edge_key(), i).is_some() {
            return Err(Error::InvalidInstance(format!("state {i} is listed twice")));
        }
    }
    let switches: Vec<Vec<SwitchMove>> = states.iter().map(enumerate_legal_switches).collect();
    let counts: Vec<usize> = switches.iter().map(Vec::len).collect();
    let m = states.len();
    let mut p = vec![vec![0.0; m]; m];
    for (x, g) in states.iter().enumerate() {
        let lx = counts[x] as f64;
        for mv in &switches[x] {
            let mut h = g.clone();
            mv.apply_unchecked(&mut h);
            let y = *index.get(&h.edge_key()).ok_or_else(|| {
                Error::InvalidInstance(format!("a switch leads from state {x} outside the set"))
            })?;
            let ly = counts[y] as f64;
            p[x][y] += 0.5 * (1.0 / lx) * (lx / (lx + ly));
        }
        let off: f64 = p[x].iter().sum();
        p[x][x] = 1.0 - off;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> (JdmInstance, LabeledGraph) {
        let inst = JdmInstance::new(vec![4], vec![2], vec![vec![4]]).unwrap();
        let g = LabeledGraph::from_edges(inst.layout().clone(), [(0, 1), (1, 2), (2, 3), (0, 3)])
            .unwrap();
        (inst, g)
    }

    #[test]
    fn zero_steps_returns_start() {
        let (inst, g) = c4();
        let run = run_chain(&inst, &g, ChainConfig { steps: 0, seed: 7, histogram: false }).unwrap();
        assert_eq!(run.graph, g);
        assert_eq!(run.metadata.steps, 0);
    }

    #[test]
    fn same_seed_same_run() {
        let (inst, g) = c4();
        let cfg = ChainConfig { steps: 500, seed: 11, histogram: true };
        let a = run_chain(&inst, &g, cfg).unwrap();
        let b = run_chain(&inst, &g, cfg).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.histogram, b.histogram);
        assert_eq!(a.histogram.unwrap().total(), 500);
    }

    #[test]
    fn k22_never_moves() {
        let inst = JdmInstance::new(vec![2, 2], vec![2, 2], vec![vec![0, 4], vec![4, 0]]).unwrap();
        let g = LabeledGraph::from_edges(inst.layout().clone(), [(0, 2), (0, 3), (1, 2), (1, 3)])
            .unwrap();
        let mut s = ChainState::new(g.clone(), 3);
        for _ in 0..50 {
            assert!(matches!(s.step(), StepOutcome::Lazy | StepOutcome::Stuck));
        }
        assert_eq!(s.graph(), &g);
    }

    #[test]
    fn four_cycle_transition_matrix_is_symmetric() {
        let (_, g) = c4();
        let mut states = vec![g.clone()];
        for m in enumerate_legal_switches(&g) {
            let mut h = g.clone();
            m.apply(&mut h).unwrap();
            states.push(h);
        }
        let p = transition_matrix(&states).unwrap();
        for x in 0..3 {
            assert!((p[x].iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for y in 0..3 {
                if x != y {
                    assert!((p[x][y] - 0.125).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn rejects_non_realization() {
        let (inst, _) = c4();
        let path = LabeledGraph::from_edges(inst.layout().clone(), [(0, 1), (1, 2)]).unwrap();
        assert!(run_chain(&inst, &path, ChainConfig { steps: 1, seed: 0, histogram: false }).is_err());
    }

    #[test]
    fn histogram_merge_is_associative() {
        let (_, g) = c4();
        let mut a = Histogram::default();
        a.record(&g);
        let mut b = Histogram::default();
        b.record(&g);
        b.record(&g);
        let mut c = Histogram::default();
        c.record(&g);
        let mut left = a.clone();
        left.merge(&b);
        left.merge(&c);
        let mut bc = b.clone();
        bc.merge(&c);
        let mut right = a.clone();
        right.merge(&bc);
        assert_eq!(left, right);
        assert_eq!(left.total(), 4);
    }
}
