//! Hierarchical decompositions via the FRT cutting scheme, padding checks and
//! their derandomized construction.

mod derandomize;
mod estimator;

pub use derandomize::{default_tau, derandomized_decomposition, padded_family, DerandomizedDecomposition, PaddedFamily};
pub use estimator::{
    beta_threshold_points, beta_thresholds, calibrate_alpha, calibrate_alpha_uniform, candidate_cutters, pessimistic_estimate,
    NodeDistribution, PrefixPermutation,
};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Metric, RootedTree, EPS};

/// Number of levels above the singleton level: the smallest `h` with
/// `2^(h-2) >= D`, so the top radius `2^(h-1) * beta` covers the diameter.
pub fn level_count(diameter: f64) -> usize {
    if diameter <= EPS {
        return 0;
    }
    let mut h = 2;
    while ((1u64 << (h - 2)) as f64) < diameter - EPS {
        h += 1;
    }
    h
}

/// A permutation of the vertices plus the radius multiplier `beta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuttingDraw {
    pub pi: Vec<usize>,
    pub beta: f64,
}

impl CuttingDraw {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(0.5..1.0).contains(&self.beta) {
            return invalid(format!("beta {} outside [0.5, 1)", self.beta));
        }
        let mut seen = vec![false; n];
        if self.pi.len() != n {
            return invalid("permutation length differs from vertex count");
        }
        for &v in &self.pi {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return invalid("pi is not a permutation");
            }
        }
        Ok(())
    }
}

/// Partitions `P_0 .. P_h`, stored as a part index per level and vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HierarchicalDecomposition {
    part_of: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct LevelsDump {
    levels: Vec<Vec<Vec<usize>>>,
}

impl HierarchicalDecomposition {
    pub fn h(&self) -> usize {
        self.part_of.len() - 1
    }

    pub fn n(&self) -> usize {
        self.part_of[0].len()
    }

    pub fn part(&self, level: usize, v: usize) -> usize {
        self.part_of[level][v]
    }

    pub fn part_count(&self, level: usize) -> usize {
        self.part_of[level].iter().max().map_or(0, |&p| p + 1)
    }

    /// Parts of `level`, each sorted, in part-id order.
    pub fn parts(&self, level: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.part_count(level)];
        for (v, &p) in self.part_of[level].iter().enumerate() {
            out[p].push(v);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let levels = (0..=self.h()).map(|i| self.parts(i)).collect();
        serde_json::to_value(LevelsDump { levels }).expect("plain data")
    }
}

/// Runs the cutting scheme: at level `i` each vertex joins the first `u` in
/// `pi` within radius `2^(i-1) * beta`, intersected with its level `i+1` part.
pub fn decomposition_from(m: &Metric, draw: &CuttingDraw) -> Result<HierarchicalDecomposition> {
    let n = m.n();
    draw.validate(n)?;
    let h = level_count(m.diameter());
    let mut part_of = vec![vec![0usize; n]; h + 1];
    for i in (0..h).rev() {
        let radius = (i as f64 - 1.0).exp2() * draw.beta;
        let mut ids = std::collections::HashMap::new();
        for v in 0..n {
            let center = *draw.pi.iter().find(|&&u| m.d(u, v) <= radius + EPS).expect("v covers itself");
            let key = (part_of[i + 1][v], center);
            let next = ids.len();
            part_of[i][v] = *ids.entry(key).or_insert(next);
        }
    }
    Ok(HierarchicalDecomposition { part_of })
}

/// Checks the single top part, refinement, diameter bounds and singleton bottom.
pub fn validate_decomposition(m: &Metric, hd: &HierarchicalDecomposition) -> Result<()> {
    let n = m.n();
    let h = hd.h();
    let bad = |msg: String| Err(Error::ContractViolation(msg));
    if hd.n() != n || h != level_count(m.diameter()) {
        return bad("decomposition shape does not match the metric".into());
    }
    if hd.part_count(h) != 1 {
        return bad("top level is not a single part".into());
    }
    if hd.part_count(0) != n {
        return bad("bottom level is not all singletons".into());
    }
    for i in 0..=h {
        for part in hd.parts(i) {
            if part.is_empty() {
                return bad(format!("empty part at level {i}"));
            }
            for &a in &part {
                for &b in &part {
                    if m.d(a, b) > (i as f64).exp2() + EPS {
                        return bad(format!("part at level {i} exceeds diameter 2^{i}"));
                    }
                }
                if i < h && hd.part(i + 1, a) != hd.part(i + 1, part[0]) {
                    return bad(format!("level {i} does not refine level {}", i + 1));
                }
            }
        }
    }
    Ok(())
}

/// Whether `B(v, alpha 2^i)` sits inside one part of `P_i` at every level.
pub fn is_alpha_padded(m: &Metric, hd: &HierarchicalDecomposition, v: usize, alpha: f64) -> bool {
    (0..=hd.h()).all(|i| {
        let own = hd.part(i, v);
        m.ball(v, alpha * (i as f64).exp2()).iter().all(|&u| hd.part(i, u) == own)
    })
}

/// The tree of parts: one node per part, a level-`i` part hangs below its
/// level-`i+1` part with an edge of weight `2^(i+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionTree {
    pub tree: RootedTree,
    /// Level of each node.
    pub level: Vec<usize>,
    /// Leaf node of each vertex.
    pub leaf: Vec<usize>,
}

pub fn tree_of(hd: &HierarchicalDecomposition) -> DecompositionTree {
    let h = hd.h();
    let mut node_of = vec![Vec::new(); h + 1];
    let mut parents = Vec::new();
    let mut weights = Vec::new();
    let mut level = Vec::new();
    for i in (0..=h).rev() {
        let parts = hd.parts(i);
        for part in &parts {
            node_of[i].push(parents.len());
            level.push(i);
            if i == h {
                parents.push(None);
                weights.push(0.0);
            } else {
                parents.push(Some(node_of[i + 1][hd.part(i + 1, part[0])]));
                weights.push(((i + 1) as f64).exp2());
            }
        }
    }
    let tree = RootedTree::from_parents(&parents, &weights).expect("parts form a tree");
    let leaf = (0..hd.n()).map(|v| node_of[0][hd.part(0, v)]).collect();
    DecompositionTree { tree, level, leaf }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_well_separated, shortest_path_metric, WeightedGraph};

    fn two() -> Metric {
        shortest_path_metric(&WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap()).unwrap()
    }

    #[test]
    fn level_counts() {
        assert_eq!(level_count(0.0), 0);
        assert_eq!(level_count(1.0), 2);
        assert_eq!(level_count(2.0), 3);
        assert_eq!(level_count(3.0), 4);
        assert_eq!(level_count(4.0), 4);
    }

    #[test]
    fn two_vertices_merge_at_level_two() {
        let m = two();
        for beta in [0.5, 0.7, 0.99] {
            let hd = decomposition_from(&m, &CuttingDraw { pi: vec![1, 0], beta }).unwrap();
            assert_eq!(hd.h(), 2);
            assert_eq!(hd.part_count(0), 2);
            assert_eq!(hd.part_count(1), 2);
            assert_eq!(hd.part_count(2), 1);
            validate_decomposition(&m, &hd).unwrap();
        }
    }

    #[test]
    fn single_vertex() {
        let m = shortest_path_metric(&WeightedGraph::new(1, []).unwrap()).unwrap();
        let hd = decomposition_from(&m, &CuttingDraw { pi: vec![0], beta: 0.5 }).unwrap();
        assert_eq!(hd.h(), 0);
        assert_eq!(hd.parts(0), vec![vec![0]]);
        assert_eq!(tree_of(&hd).tree.n(), 1);
        assert!(is_alpha_padded(&m, &hd, 0, 0.125));
    }

    #[test]
    fn padding_on_two_vertices() {
        let m = two();
        let hd = decomposition_from(&m, &CuttingDraw { pi: vec![0, 1], beta: 0.75 }).unwrap();
        assert!(is_alpha_padded(&m, &hd, 0, 1.0 / 16.0));
        assert!(is_alpha_padded(&m, &hd, 1, 1.0 / 16.0));
        assert!(!is_alpha_padded(&m, &hd, 0, 0.5));
        assert!(is_alpha_padded(&m, &hd, 0, 1e-6));
    }

    #[test]
    fn decomposition_tree_distance() {
        let hd = decomposition_from(&two(), &CuttingDraw { pi: vec![0, 1], beta: 0.75 }).unwrap();
        let t = tree_of(&hd);
        assert_eq!(t.tree.distance(t.leaf[0], t.leaf[1]), 12.0);
        assert!(is_well_separated(&t.tree));
    }

    #[test]
    fn rejects_bad_draws() {
        let m = two();
        assert!(decomposition_from(&m, &CuttingDraw { pi: vec![0, 0], beta: 0.7 }).is_err());
        assert!(decomposition_from(&m, &CuttingDraw { pi: vec![0, 1], beta: 1.0 }).is_err());
    }
}
