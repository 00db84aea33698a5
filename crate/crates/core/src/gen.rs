//! Seeded random instances for tests, examples and benchmarks.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::graph::{RootedTree, WeightedGraph};

/// Random spanning tree plus `extra` distinct extra edges, integer weights in `1..=max_w`.
pub fn connected_graph<R: Rng>(rng: &mut R, n: usize, extra: usize, max_w: u32) -> WeightedGraph {
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        seen.insert((u, v));
        edges.push((u, v, rng.random_range(1..=max_w) as f64));
    }
    let mut budget = extra.min(n * n.saturating_sub(1) / 2 - edges.len());
    while budget > 0 {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        let key = (a.min(b), a.max(b));
        if a != b && seen.insert(key) {
            edges.push((key.0, key.1, rng.random_range(1..=max_w) as f64));
            budget -= 1;
        }
    }
    WeightedGraph::new(n, edges).expect("valid by construction")
}

/// Random tree rooted at 0 whose depth (in edges) is at most `max_depth`.
pub fn tree<R: Rng>(rng: &mut R, n: usize, max_depth: usize, max_w: u32) -> RootedTree {
    let mut depth = vec![0usize; n];
    let mut parents = vec![None; n];
    let mut weights = vec![0.0; n];
    for v in 1..n {
        let options: Vec<usize> = (0..v).filter(|&u| depth[u] < max_depth).collect();
        let u = *options.choose(rng).expect("the root always qualifies");
        parents[v] = Some(u);
        depth[v] = depth[u] + 1;
        weights[v] = rng.random_range(1..=max_w) as f64;
    }
    RootedTree::from_parents(&parents, &weights).expect("valid by construction")
}

/// `k` nonempty groups of at most `max_size` vertices drawn from `pool`.
pub fn groups<R: Rng>(rng: &mut R, pool: &[usize], k: usize, max_size: usize) -> Vec<Vec<usize>> {
    (0..k)
        .map(|_| {
            let size = rng.random_range(1..=max_size.min(pool.len()).max(1));
            let mut g: Vec<usize> = pool.choose_multiple(rng, size).copied().collect();
            g.sort_unstable();
            g
        })
        .collect()
}

/// Up to `k` pairwise disjoint groups of at most `max_size` vertices from `pool`.
pub fn disjoint_groups<R: Rng>(rng: &mut R, pool: &[usize], k: usize, max_size: usize) -> Vec<Vec<usize>> {
    let mut left = pool.to_vec();
    left.shuffle(rng);
    let mut out = Vec::new();
    for _ in 0..k {
        if left.is_empty() {
            break;
        }
        let size = rng.random_range(1..=max_size.min(left.len()));
        let mut g: Vec<usize> = left.drain(..size).collect();
        g.sort_unstable();
        out.push(g);
    }
    out
}
