//! Fixed input/output pairs. Values come from hand simulation, the
//! exhaustive oracles, or closed-form arithmetic.

use copytree::decomposition::{
    calibrate_alpha, candidate_cutters, decomposition_from, derandomized_decomposition, level_count,
    pessimistic_estimate, CuttingDraw, NodeDistribution, PrefixPermutation,
};
use copytree::embedding::{
    build_construction1, build_construction2, demand_robust_tree_count, partial_tree_from, project_to_graph,
    project_to_tree, verify_embedding,
};
use copytree::gen;
use copytree::graph::{connected, is_well_separated, shortest_path_metric, EdgeSet, Metric, RootedTree, WeightedGraph};
use copytree::online::{online_gsf_driver, online_gst_driver, partial_gst_general, GreedyTreeSolver};
use copytree::oracle::{opt_group_steiner_tree, opt_robust, opt_two_level_partial, OracleBudget};
use copytree::robust::{solve_robust_general, RobustInstance, RoundingOptions, Scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn edge() -> WeightedGraph {
    WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap()
}

fn two() -> Metric {
    shortest_path_metric(&edge()).unwrap()
}

#[test]
fn each_cutter_in_at_most_three_windows() {
    let mut r = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let n = r.random_range(2..=10);
        let extra = r.random_range(0..=n);
        let m = shortest_path_metric(&gen::connected_graph(&mut r, n, extra, 8)).unwrap();
        let h = level_count(m.diameter());
        for v in 0..n {
            let mut seen = vec![0; n];
            for i in 1..=h {
                for u in candidate_cutters(&m, v, i, 0.0625).unwrap() {
                    seen[u] += 1;
                }
            }
            assert!(seen.iter().enumerate().all(|(u, &c)| u == v || c <= 3));
        }
    }
}

#[test]
fn full_prefix_estimate() {
    let prefix = PrefixPermutation::from_order(2, &[0, 1]).unwrap();
    let f = pessimistic_estimate(&two(), &NodeDistribution::uniform(2), &prefix, 0.9, 0.125).unwrap();
    assert!((f - 0.5).abs() <= 1e-12);
}

#[test]
fn single_vertex_calibration() {
    let m = shortest_path_metric(&WeightedGraph::new(1, []).unwrap()).unwrap();
    assert_eq!(calibrate_alpha(&m, &NodeDistribution::uniform(1)), 0.125);
    assert_eq!(calibrate_alpha(&two(), &NodeDistribution::uniform(2)), 0.0625);
}

#[test]
fn concentrated_mass_is_padded() {
    let mut r = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let g = gen::connected_graph(&mut r, 10, 4, 8);
        let m = shortest_path_metric(&g).unwrap();
        let v = r.random_range(0..10);
        let w: Vec<f64> = (0..10).map(|u| if u == v { 1.0 - 9e-3 } else { 1e-3 }).collect();
        let p = NodeDistribution::from_weights(&w).unwrap();
        let alpha = calibrate_alpha(&m, &p);
        let d = derandomized_decomposition(&m, &p, alpha).unwrap();
        assert!(d.padded_weight >= 0.95);
        assert!(copytree::decomposition::is_alpha_padded(&m, &d.decomposition, v, alpha));
    }
}

#[test]
fn two_vertex_projections() {
    let m = two();
    let hd = decomposition_from(&m, &CuttingDraw { pi: vec![0, 1], beta: 0.75 }).unwrap();
    let pt = partial_tree_from(&m, &hd, 0, 0.0625).unwrap();
    let fp = project_to_tree(&pt, &edge(), &EdgeSet::from_iter([0]));
    assert_eq!(fp.weight(pt.tree.graph()), 16.0);
    assert!(project_to_tree(&pt, &edge(), &EdgeSet::new()).is_empty());
    let back = project_to_graph(&pt, &edge(), &m, &fp);
    assert_eq!(back, EdgeSet::from_iter([0]));
    assert!(project_to_graph(&pt, &edge(), &m, &EdgeSet::new()).is_empty());
}

#[test]
fn two_vertex_construction1() {
    let e = build_construction1(&edge(), 0, 0.25).unwrap();
    assert!(e.copy_number() <= 45);
    assert_eq!(e.phi(0).len(), 1);
    let rep = verify_embedding(&e, 50, 1);
    assert!(rep.passed);
    assert_eq!(rep.alpha_fwd, 16.0);
}

#[test]
fn frt_support_dominates() {
    let e = build_construction2(&edge(), 0, 3, 5).unwrap();
    assert_eq!(e.phi(1).len(), 3);
    for &x in e.phi(1) {
        assert!(e.tree().distance(e.tree().root(), x) >= 1.0);
    }
    assert_eq!(demand_robust_tree_count(2, 1), 12);
    let mut r = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let g = gen::connected_graph(&mut r, 8, 3, 8);
        let e = build_construction2(&g, 0, 4, r.random()).unwrap();
        assert!(is_well_separated(e.tree()));
        assert!(verify_embedding(&e, 20, 0).passed);
    }
}

fn star(weights: &[f64]) -> RootedTree {
    let mut parents = vec![None];
    parents.extend(weights.iter().map(|_| Some(0)));
    let mut w = vec![0.0];
    w.extend_from_slice(weights);
    RootedTree::from_parents(&parents, &w).unwrap()
}

#[test]
fn online_star_and_path() {
    let s = star(&[1.0, 3.0]);
    let e = build_construction1(s.graph(), 0, 0.25).unwrap();
    let steps = online_gst_driver(&e, &mut GreedyTreeSolver::new(e.tree()), &[vec![1, 2]]).unwrap();
    assert!(connected(s.graph(), &steps[0].solution, &[1, 2], &[0]));

    let path = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
    let e = build_construction1(&path, 0, 0.25).unwrap();
    let pairs = vec![(vec![1], vec![2]), (vec![2], vec![2])];
    let steps = online_gsf_driver(&e, &mut GreedyTreeSolver::new(e.tree()), &pairs).unwrap();
    assert!(connected(&path, &steps[0].solution, &[1], &[2]));
    assert_eq!(steps[0].solution, steps[1].solution);
}

#[test]
fn partial_half_groups() {
    let mut r = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..10 {
        let n = r.random_range(2..=12);
        let g = gen::connected_graph(&mut r, n, 3, 8);
        let e = build_construction1(&g, 0, 0.25).unwrap();
        let pool: Vec<usize> = (0..n).collect();
        let stream: Vec<(Vec<usize>, usize)> = gen::groups(&mut r, &pool, 3, 4)
            .into_iter()
            .map(|gr| {
                let f = gr.len().div_ceil(2);
                (gr, f)
            })
            .collect();
        for eps in [0.5, 0.25] {
            for s in partial_gst_general(&e, &stream, eps).unwrap() {
                let f = stream[s.step].1;
                assert!(s.connected >= ((1.0 - eps) * f as f64 - 1e-12).ceil() as usize);
            }
        }
    }
}

#[test]
fn two_level_oracle() {
    let s = star(&[1.0, 1.0, 2.0]);
    let b = OracleBudget::default();
    let gs = vec![vec![1], vec![2], vec![3]];
    assert_eq!(opt_two_level_partial(&s, &[(gs.clone(), 2)], &b).unwrap().cost, 2.0);
    assert_eq!(opt_two_level_partial(&s, &[(gs, 3)], &b).unwrap().cost, 4.0);
    let mut r = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let n = r.random_range(2..=10);
        let t = gen::tree(&mut r, n, n, 8);
        let singles: Vec<Vec<usize>> = (0..3).map(|_| vec![r.random_range(0..n)]).collect();
        let demands: Vec<(Vec<Vec<usize>>, usize)> = singles.iter().map(|s| (vec![s.clone()], 1)).collect();
        let a = opt_two_level_partial(&t, &demands, &b).unwrap().cost;
        let c = opt_group_steiner_tree(t.graph(), 0, &singles, &b).unwrap().cost;
        assert_eq!(a, c);
    }
}

#[test]
fn robust_single_edge() {
    let b = OracleBudget::default();
    let inst = RobustInstance::new(vec![Scenario::groups(2.0, vec![vec![1]])]);
    assert_eq!(opt_robust(&edge(), 0, &inst, &b).unwrap().cost, 1.0);
    let once = RobustInstance::new(vec![Scenario::groups(1.0, vec![vec![1]])]);
    let run = solve_robust_general(&edge(), 0, &once, &RoundingOptions::default()).unwrap();
    assert_eq!(run.evaluation.worst_case, 1.0);
    assert_eq!(opt_robust(&edge(), 0, &once, &b).unwrap().cost, 1.0);
}
