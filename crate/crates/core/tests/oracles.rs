//! Worked examples checked against brute-force oracles.

mod common;

use std::sync::Arc;

use jdm_core::connected::{balance_tree, expand_tree, valid_tree_construction, TreeOutcome};
use jdm_core::sampler::{enumerate_omega, run_chain, ChainConfig, ChainState, StepOutcome};
use jdm_core::star::{build_matching_gadget, perfect_matching, ForbiddenDegreeProblem};
use jdm_core::{
    balanced_realize, contract, edge, enumerate_legal_switches, realize_connected, realize_star,
    switch_path, ClassLayout, ConnectedOutcome, Edge, JdmInstance, LabeledGraph, StarEntry,
    StarInstance, SwitchMove,
};

use common::Raw;

fn raw(sizes: &[usize], degrees: &[usize], matrix: &[&[usize]]) -> Raw {
    Raw {
        sizes: sizes.to_vec(),
        degrees: degrees.to_vec(),
        matrix: matrix.iter().map(|r| r.to_vec()).collect(),
    }
}

fn edges_of(g: &LabeledGraph) -> Vec<Edge> {
    g.edges().collect()
}

fn graph(inst: &JdmInstance, edges: &[Edge]) -> LabeledGraph {
    LabeledGraph::from_edges(inst.layout().clone(), edges.iter().copied()).unwrap()
}

#[test]
fn two_class_instance_output_is_in_omega() {
    let r = raw(&[2, 2], &[2, 1], &[&[1, 2], &[2, 0]]);
    let omega = common::realizations(&r);
    assert!(!omega.is_empty());
    let g = balanced_realize(&r.instance(), None).unwrap();
    assert!(omega.contains(&edges_of(&g)));
}

#[test]
fn two_class_instance_connected_realization() {
    let r = raw(&[2, 2], &[2, 1], &[&[1, 2], &[2, 0]]);
    let omega = common::realizations(&r);
    assert!(omega.iter().any(|e| common::is_connected(4, e)));
    match realize_connected(&r.instance()).unwrap() {
        ConnectedOutcome::Connected(g) => {
            let e = edges_of(&g);
            assert!(omega.contains(&e) && common::is_connected(4, &e));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn two_regular_on_six_is_one_of_seventy() {
    let r = raw(&[6], &[2], &[&[6]]);
    let omega = common::realizations(&r);
    assert_eq!(omega.len(), 70);
    let connected = omega.iter().filter(|e| common::is_connected(6, e)).count();
    assert_eq!(connected, 60);
    let g = balanced_realize(&r.instance(), None).unwrap();
    assert!(omega.contains(&edges_of(&g)));
    let listed: Vec<Vec<Edge>> = enumerate_omega(&r.instance(), 10).unwrap().iter().map(edges_of).collect();
    let mut sorted = omega.clone();
    sorted.sort();
    assert_eq!(listed, sorted);
}

#[test]
fn four_cycles() {
    let r = raw(&[4], &[2], &[&[4]]);
    assert_eq!(common::realizations(&r).len(), 3);
    assert_eq!(enumerate_omega(&r.instance(), 10).unwrap().len(), 3);
}

#[test]
fn two_triangles_never_connected() {
    let r = raw(&[3, 3], &[2, 2], &[&[3, 0], &[0, 3]]);
    let omega = common::realizations(&r);
    assert!(!omega.is_empty());
    assert!(omega.iter().all(|e| !common::is_connected(6, e)));
    assert!(matches!(
        realize_connected(&r.instance()).unwrap(),
        ConnectedOutcome::NoConnectedRealization(_)
    ));
}

/// Whether some spanning tree of the contracted vertex set respects the
/// capacities, by trying every edge subset of size `|V~| - 1`.
fn tree_exists(sizes: &[usize], capacity: &[Vec<usize>]) -> bool {
    let n: usize = sizes.iter().sum();
    let class: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &s)| vec![c; s]).collect();
    let pairs: Vec<Edge> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| class[a] != class[b])
        .collect();
    (0u32..1 << pairs.len()).any(|m| {
        let chosen: Vec<Edge> = (0..pairs.len()).filter(|&i| m >> i & 1 == 1).map(|i| pairs[i]).collect();
        if chosen.len() + 1 != n || !common::is_connected(n, &chosen) {
            return false;
        }
        let k = sizes.len();
        let mut used = vec![vec![0; k]; k];
        for &(a, b) in &chosen {
            used[class[a]][class[b]] += 1;
            used[class[b]][class[a]] += 1;
        }
        (0..k).all(|i| (0..k).all(|j| i == j || used[i][j] <= capacity[i][j]))
    })
}

#[test]
fn contracted_tree_matches_exhaustive_search() {
    for (sizes, degrees, matrix) in [
        (vec![2, 2], vec![2, 1], vec![vec![1, 2], vec![2, 0]]),
        (vec![3, 3], vec![2, 2], vec![vec![3, 0], vec![0, 3]]),
        (vec![2, 2, 2], vec![1, 1, 2], vec![vec![0, 0, 2], vec![0, 0, 2], vec![2, 2, 1]]),
        (vec![1, 3, 2], vec![3, 1, 2], vec![vec![0, 3, 0], vec![3, 0, 0], vec![0, 0, 1]]),
    ] {
        let inst = JdmInstance::new(sizes, degrees, matrix).unwrap();
        let c = contract(&inst);
        let expected = tree_exists(c.sizes(), c.matrix());
        let (outcome, _) = valid_tree_construction(&c).unwrap();
        match outcome {
            TreeOutcome::Tree(t) => {
                assert!(expected);
                assert!(t.tree.is_connected());
                assert_eq!(t.tree.edge_count() + 1, c.vertex_count());
            }
            TreeOutcome::Certificate(_) => assert!(!expected),
        }
    }
}

#[test]
fn first_example_contraction_has_two_cross_edges() {
    let inst = JdmInstance::new(vec![2, 2], vec![2, 1], vec![vec![1, 2], vec![2, 0]]).unwrap();
    let c = contract(&inst);
    assert_eq!(c.vertex_count(), 3);
    assert_eq!(c.matrix()[0][1], 2);
    match valid_tree_construction(&c).unwrap().0 {
        TreeOutcome::Tree(t) => assert_eq!(t.tree.edge_count(), 2),
        other => panic!("{other:?}"),
    }
}

#[test]
fn expanded_tree_respects_within_class_budget() {
    // Class A: 4 vertices, d_AA = 3, so |V~_A| = 1; class B: 2 vertices.
    let inst = JdmInstance::new(vec![4, 2], vec![2, 1], vec![vec![3, 2], vec![2, 0]]).unwrap();
    let c = contract(&inst);
    assert_eq!(c.sizes(), &[1, 2]);
    let TreeOutcome::Tree(t) = valid_tree_construction(&c).unwrap().0 else {
        panic!("a star from the single A vertex fits the capacities");
    };
    let expanded = expand_tree(&t, &inst).unwrap();
    assert!(expanded.is_connected() && expanded.edge_count() == 5);
    let within = expanded.edges().filter(|&(a, b)| a < 4 && b < 4).count();
    assert_eq!(within, 4 - 1);
    assert!(within <= inst.entry(0, 0));
    assert_eq!(expanded.edges().filter(|&(a, b)| (a < 4) != (b < 4)).count(), 2);
}

#[test]
fn star_tree_is_rebalanced_to_a_path() {
    let inst = JdmInstance::new(vec![4], vec![2], vec![vec![4]]).unwrap();
    let star = graph(&inst, &[(0, 1), (0, 2), (0, 3)]);
    let balanced = balance_tree(&star, &inst).unwrap();
    let mut degrees: Vec<usize> = (0..4).map(|v| balanced.tree.degree(v)).collect();
    degrees.sort_unstable();
    assert_eq!(degrees, vec![1, 1, 2, 2]);
    assert!(balanced.tree.is_connected() && balanced.tree.edge_count() == 3);
}

/// Sorted edge lists of all graphs realizing a wildcard instance.
fn star_oracle(sizes: &[usize], degrees: &[usize], matrix: &[Vec<StarEntry>]) -> Vec<Vec<Edge>> {
    let n: usize = sizes.iter().sum();
    let class: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &s)| vec![c; s]).collect();
    let pairs: Vec<Edge> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let k = sizes.len();
    let mut out = Vec::new();
    for m in 0u32..1 << pairs.len() {
        let chosen: Vec<Edge> = (0..pairs.len()).filter(|&i| m >> i & 1 == 1).map(|i| pairs[i]).collect();
        let mut deg = vec![0; n];
        let mut count = vec![vec![0; k]; k];
        for &(a, b) in &chosen {
            deg[a] += 1;
            deg[b] += 1;
            count[class[a]][class[b]] += 1;
            if class[a] != class[b] {
                count[class[b]][class[a]] += 1;
            }
        }
        let degrees_ok = (0..n).all(|v| deg[v] == degrees[class[v]]);
        let counts_ok = (0..k).all(|i| (0..k).all(|j| matrix[i][j].count().is_none_or(|c| c == count[i][j])));
        if degrees_ok && counts_ok {
            out.push(chosen);
        }
    }
    out
}

#[test]
fn star_cross_wildcard_is_a_perfect_matching() {
    let any = StarEntry::Any;
    let zero = StarEntry::Count(0);
    let matrix = vec![vec![zero, any], vec![any, zero]];
    let inst = StarInstance::new(vec![2, 2], vec![1, 1], matrix.clone()).unwrap();
    let oracle = star_oracle(&[2, 2], &[1, 1], &matrix);
    assert_eq!(oracle.len(), 2);
    let g = realize_star(&inst).unwrap();
    assert!(oracle.contains(&edges_of(&g)));
}

#[test]
fn star_instances_agree_with_enumeration() {
    let any = StarEntry::Any;
    let c = StarEntry::Count;
    let cases: Vec<(Vec<usize>, Vec<usize>, Vec<Vec<StarEntry>>)> = vec![
        (vec![3], vec![2], vec![vec![any]]),
        (vec![3], vec![1], vec![vec![any]]),
        (vec![2, 3], vec![2, 2], vec![vec![any, any], vec![any, any]]),
        (vec![2, 3], vec![2, 2], vec![vec![c(1), any], vec![any, any]]),
        (vec![2, 3], vec![1, 2], vec![vec![c(0), any], vec![any, c(2)]]),
        (vec![3, 3], vec![2, 2], vec![vec![c(3), any], vec![any, any]]),
        (vec![2, 2, 2], vec![1, 2, 1], vec![vec![any, c(2), c(0)], vec![c(2), any, any], vec![c(0), any, any]]),
    ];
    for (sizes, degrees, matrix) in cases {
        let inst = StarInstance::new(sizes.clone(), degrees.clone(), matrix.clone()).unwrap();
        let oracle = star_oracle(&sizes, &degrees, &matrix);
        match realize_star(&inst) {
            Ok(g) => assert!(oracle.contains(&edges_of(&g)), "{sizes:?} {matrix:?}"),
            Err(e) => assert!(oracle.is_empty(), "{sizes:?} {matrix:?}: {e}"),
        }
    }
}

#[test]
fn gadget_small_cases() {
    let single = ForbiddenDegreeProblem::from_pairs(vec![1, 1], []).unwrap();
    let g = build_matching_gadget(&single).unwrap();
    assert_eq!((g.vertex_count(), g.edges().to_vec()), (2, vec![(g.slot(0, 1).min(g.slot(1, 0)), g.slot(0, 1).max(g.slot(1, 0)))]));
    let empty = ForbiddenDegreeProblem::from_pairs(vec![0, 0], []).unwrap();
    let g = build_matching_gadget(&empty).unwrap();
    assert_eq!(g.vertex_count(), 4);
    let m = perfect_matching(g.vertex_count(), g.edges()).unwrap();
    assert!(m.contains(&edge(g.slot(0, 1), g.enforcers(0).start)));
    assert!(m.contains(&edge(g.slot(1, 0), g.enforcers(1).start)));
}

/// Whether a perfect matching exists, by trying every partner of the
/// smallest unmatched vertex.
fn has_perfect_matching(n: usize, edges: &[Edge]) -> bool {
    fn go(free: &mut Vec<bool>, edges: &[Edge]) -> bool {
        let Some(u) = free.iter().position(|&f| f) else {
            return true;
        };
        free[u] = false;
        for &(a, b) in edges {
            let v = if a == u { b } else if b == u { a } else { continue };
            if free[v] {
                free[v] = false;
                if go(free, edges) {
                    return true;
                }
                free[v] = true;
            }
        }
        free[u] = true;
        false
    }
    go(&mut vec![true; n], edges)
}

#[test]
fn blossom_on_two_joined_triangles() {
    let edges = [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)];
    assert!(has_perfect_matching(6, &edges));
    let m = perfect_matching(6, &edges).unwrap();
    assert_eq!(m.len(), 3);
    let mut covered: Vec<usize> = m.iter().flat_map(|&(a, b)| [a, b]).collect();
    covered.sort_unstable();
    assert_eq!(covered, (0..6).collect::<Vec<_>>());
    assert!(m.iter().all(|e| edges.contains(e)));
}

#[test]
fn matching_agrees_with_exhaustive_search_on_small_graphs() {
    let pairs: Vec<Edge> = (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect();
    for m in (0u32..1 << 15).step_by(7) {
        let edges: Vec<Edge> = (0..15).filter(|&i| m >> i & 1 == 1).map(|i| pairs[i]).collect();
        assert_eq!(perfect_matching(6, &edges).is_some(), has_perfect_matching(6, &edges), "{edges:?}");
    }
}

#[test]
fn four_cycle_switch_counts() {
    let inst = JdmInstance::new(vec![4], vec![2], vec![vec![4]]).unwrap();
    let class = vec![0; 4];
    for g in enumerate_omega(&inst, 10).unwrap() {
        let oracle = common::switch_neighbors(&class, &edges_of(&g));
        assert_eq!(oracle.len(), 2);
        assert_eq!(enumerate_legal_switches(&g).len(), 2);
    }
}

#[test]
fn switch_enumeration_matches_quadruple_scan() {
    for r in common::instance_grid(6, 3, 3).into_iter().step_by(5) {
        let inst = r.instance();
        let class = r.class_of();
        for g in enumerate_omega(&inst, 10).unwrap().into_iter().take(20) {
            let oracle = common::switch_neighbors(&class, &edges_of(&g));
            let mut via_lib: Vec<Vec<Edge>> = enumerate_legal_switches(&g)
                .iter()
                .map(|s| {
                    let mut h = g.clone();
                    s.apply(&mut h).unwrap();
                    edges_of(&h)
                })
                .collect();
            via_lib.sort();
            assert_eq!(via_lib, oracle, "{r:?}");
        }
    }
}

#[test]
fn seeded_chain_replay() {
    let inst = JdmInstance::new(vec![4], vec![2], vec![vec![4]]).unwrap();
    let omega = enumerate_omega(&inst, 10).unwrap();
    let keys: Vec<Vec<Edge>> = omega.iter().map(edges_of).collect();
    let mut state = ChainState::new(omega[0].clone(), 7);
    let mut other = ChainState::new(omega[0].clone(), 7);
    for _ in 0..200 {
        let before = state.graph().clone();
        let outcome = state.step();
        assert_eq!(outcome, other.step());
        assert!(keys.contains(&edges_of(state.graph())));
        match outcome {
            StepOutcome::Accepted(_) => assert_ne!(&before, state.graph()),
            _ => assert_eq!(&before, state.graph()),
        }
    }
    // Every 4-cycle has two switches, so l(G) / (l(G) + l(G')) = 1/2.
    let stats = state.stats();
    assert!(stats.accepted > 0 && stats.accepted < stats.proposals);
}

#[test]
fn zero_step_chain_returns_its_start() {
    let inst = JdmInstance::new(vec![4], vec![2], vec![vec![4]]).unwrap();
    let g = enumerate_omega(&inst, 10).unwrap()[1].clone();
    let run = run_chain(&inst, &g, ChainConfig { steps: 0, seed: 7, histogram: false }).unwrap();
    assert_eq!(run.graph, g);
}

#[test]
fn single_switch_between_four_cycles() {
    let layout = Arc::new(ClassLayout::new(vec![4]).unwrap());
    // 0-1-2-3-0 and 0-2-1-3-0 in zero-based labels.
    let from = LabeledGraph::from_edges(layout.clone(), [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
    let to = LabeledGraph::from_edges(layout, [(0, 2), (1, 2), (1, 3), (0, 3)]).unwrap();
    let path = switch_path(&from, &to).unwrap();
    assert_eq!(path.moves.len(), 1);
    let mv: SwitchMove = path.moves[0];
    let mut g = from.clone();
    mv.apply(&mut g).unwrap();
    assert_eq!(g, to);
}

#[test]
fn two_triangles_to_hexagon() {
    let r = raw(&[6], &[2], &[&[6]]);
    let inst = r.instance();
    let triangles = graph(&inst, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
    let hexagon = graph(&inst, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]);
    let omega = common::realizations(&r);
    let path = switch_path(&triangles, &hexagon).unwrap();
    assert!(path.within_budget());
    let mut g = triangles;
    for mv in &path.moves {
        mv.apply(&mut g).unwrap();
        assert!(omega.contains(&edges_of(&g)));
    }
    assert_eq!(g, hexagon);
}
