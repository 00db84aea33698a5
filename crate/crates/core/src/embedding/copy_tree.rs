use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::partial::{contract, partial_tree_from, project_components, PartialTreeEmbedding};
use crate::decomposition::{
    calibrate_alpha, calibrate_alpha_uniform, decomposition_from, is_alpha_padded, padded_family, CuttingDraw,
    NodeDistribution, PaddedFamily,
};
use crate::error::{invalid, Error, Result};
use crate::graph::{shortest_path_metric, EdgeSet, Metric, RootedTree, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// Partial trees of a padded decomposition family glued at the root.
    MergedPartial,
    /// Sampled FRT trees glued at the root.
    FrtSupport,
    /// Sampled FRT trees sized for a scenario count.
    DemandRobust,
}

/// One tree over copies of the vertices with the copy map `phi`.
#[derive(Clone, Debug, PartialEq)]
pub struct CopyTreeEmbedding {
    construction: Construction,
    graph: WeightedGraph,
    metric: Metric,
    root: usize,
    tree: RootedTree,
    copy_of: Vec<usize>,
    phi: Vec<Vec<usize>>,
    provenance: Vec<Option<usize>>,
    constituents: Vec<Vec<Option<usize>>>,
    alpha: Option<f64>,
    family: Option<PaddedFamily>,
    kept: Vec<usize>,
}

impl CopyTreeEmbedding {
    fn merge(
        construction: Construction,
        graph: WeightedGraph,
        metric: Metric,
        root: usize,
        parts: &[PartialTreeEmbedding],
    ) -> Result<Self> {
        let n = graph.n();
        let mut parents = vec![None];
        let mut weights = vec![0.0];
        let mut copy_of = vec![root];
        let mut provenance = vec![None];
        let mut constituents = Vec::with_capacity(parts.len());
        for (j, p) in parts.iter().enumerate() {
            let local_root = p.tree.root();
            let mut big = vec![0usize; p.tree.n()];
            let mut map = vec![None; n];
            map[root] = Some(0);
            for &x in p.tree.order() {
                let Some(px) = p.tree.parent(x) else { continue };
                let id = copy_of.len();
                big[x] = id;
                parents.push(Some(if px == local_root { 0 } else { big[px] }));
                weights.push(p.tree.edge_weight(p.tree.parent_edge(x).unwrap()));
                copy_of.push(p.vertex_of[x]);
                provenance.push(Some(j));
                map[p.vertex_of[x]] = Some(id);
            }
            constituents.push(map);
        }
        let tree = RootedTree::from_parents(&parents, &weights)?;
        let mut phi = vec![Vec::new(); n];
        for (x, &v) in copy_of.iter().enumerate() {
            phi[v].push(x);
        }
        if let Some(v) = (0..n).find(|&v| phi[v].is_empty()) {
            return Err(Error::ContractViolation(format!("vertex {v} has no copy")));
        }
        Ok(Self {
            construction,
            graph,
            metric,
            root,
            tree,
            copy_of,
            phi,
            provenance,
            constituents,
            alpha: None,
            family: None,
            kept: Vec::new(),
        })
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    /// Copies of `v`.
    pub fn phi(&self, v: usize) -> &[usize] {
        &self.phi[v]
    }

    /// Graph vertex a tree node is a copy of.
    pub fn copy_of(&self, x: usize) -> usize {
        self.copy_of[x]
    }

    /// Index of the constituent tree a node came from; `None` for the root.
    pub fn provenance(&self, x: usize) -> Option<usize> {
        self.provenance[x]
    }

    pub fn constituent_count(&self) -> usize {
        self.constituents.len()
    }

    /// Node of `v` inside constituent `j`, if `v` survived there.
    pub fn constituent_node(&self, j: usize, v: usize) -> Option<usize> {
        self.constituents[j][v]
    }

    pub fn copy_number(&self) -> usize {
        self.phi.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn family(&self) -> Option<&PaddedFamily> {
        self.family.as_ref()
    }

    /// Indices of the family decompositions that became constituents.
    pub fn kept_decompositions(&self) -> &[usize] {
        &self.kept
    }

    /// Union of the copies of `vs`.
    pub fn lift(&self, vs: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = vs.iter().flat_map(|&v| self.phi[v].iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The minimal forest of constituent `j` with the components of `F`.
    pub fn constituent_projection(&self, j: usize, f: &EdgeSet) -> EdgeSet {
        project_components(&self.graph, f, |v| self.constituents[j][v], |nodes| self.tree.minimal_subtree(nodes))
    }

    pub fn constituent_projections(&self, f: &EdgeSet) -> Vec<EdgeSet> {
        (0..self.constituents.len()).map(|j| self.constituent_projection(j, f)).collect()
    }

    /// Graph-to-tree map: union over constituents for the merged-partial
    /// construction, the cheapest single constituent otherwise.
    pub fn forward_map(&self, f: &EdgeSet) -> EdgeSet {
        let per = self.constituent_projections(f);
        match self.construction {
            Construction::MergedPartial => per.iter().fold(EdgeSet::new(), |acc, x| acc.union(x)),
            _ => {
                let tg = self.tree.graph();
                per.into_iter()
                    .min_by(|a, b| a.weight(tg).total_cmp(&b.weight(tg)))
                    .unwrap_or_default()
            }
        }
    }

    /// Tree-to-graph map: one shortest path per tree edge.
    pub fn backward_map(&self, fp: &EdgeSet) -> EdgeSet {
        let mut out = EdgeSet::new();
        for e in fp.iter() {
            let child = self.tree.child_of_edge(e);
            let parent = self.tree.parent(child).unwrap();
            out.extend(self.metric.shortest_path(&self.graph, self.copy_of[child], self.copy_of[parent]));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let t = &self.tree;
        let edges: Vec<_> = (1..t.n())
            .filter_map(|x| {
                let p = t.parent(x)?;
                Some(serde_json::json!([x, p, t.edge_weight(t.parent_edge(x)?)]))
            })
            .collect();
        serde_json::json!({
            "construction": self.construction,
            "root": self.root,
            "nodes": t.n(),
            "edges": edges,
            "copy_of": self.copy_of,
            "phi": self.phi,
            "provenance": self.provenance,
            "alpha": self.alpha,
            "kept_decompositions": self.kept,
        })
    }
}

fn prepare(g: &WeightedGraph, r: usize) -> Result<Metric> {
    if r >= g.n() {
        return invalid(format!("root {r} outside [0, {})", g.n()));
    }
    g.require_normalized()?;
    shortest_path_metric(g)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Construction1Options {
    pub epsilon: f64,
    /// Fixed padding parameter; calibrated when absent.
    pub alpha: Option<f64>,
    pub tau_override: Option<usize>,
}

impl Default for Construction1Options {
    fn default() -> Self {
        Self { epsilon: 0.25, alpha: None, tau_override: None }
    }
}

pub fn build_construction1(g: &WeightedGraph, r: usize, epsilon: f64) -> Result<CopyTreeEmbedding> {
    build_construction1_with(g, r, &Construction1Options { epsilon, ..Default::default() })
}

/// Padded family, one partial tree per decomposition padding `r`, glued at `r`.
pub fn build_construction1_with(g: &WeightedGraph, r: usize, opts: &Construction1Options) -> Result<CopyTreeEmbedding> {
    let m = prepare(g, r)?;
    let alpha = opts.alpha.unwrap_or_else(|| calibrate_alpha(&m, &NodeDistribution::uniform(m.n())));
    let (alpha, family) = match padded_family(&m, opts.epsilon, alpha, opts.tau_override) {
        Err(Error::GoodStart { .. }) if opts.alpha.is_none() => {
            // A later round's distribution lost the good start; use an alpha
            // that has it under every distribution.
            let alpha = calibrate_alpha_uniform(&m);
            (alpha, padded_family(&m, opts.epsilon, alpha, opts.tau_override)?)
        }
        other => (alpha, other?),
    };
    let mut kept = Vec::new();
    let mut parts = Vec::new();
    for (t, hd) in family.decompositions.iter().enumerate() {
        if is_alpha_padded(&m, hd, r, alpha) {
            parts.push(partial_tree_from(&m, hd, r, alpha)?);
            kept.push(t);
        }
    }
    let mut e = CopyTreeEmbedding::merge(Construction::MergedPartial, g.clone(), m, r, &parts)?;
    e.alpha = Some(alpha);
    e.family = Some(family);
    e.kept = kept;
    Ok(e)
}

fn sample_frt(m: &Metric, r: usize, rng: &mut ChaCha8Rng) -> Result<PartialTreeEmbedding> {
    let mut pi: Vec<usize> = (0..m.n()).collect();
    pi.shuffle(rng);
    let beta = rng.random_range(0.5..1.0);
    let hd = decomposition_from(m, &CuttingDraw { pi, beta })?;
    Ok(contract(m, &hd, r, &vec![true; m.n()]))
}

/// `k` seeded FRT samples glued at `r`.
pub fn build_construction2(g: &WeightedGraph, r: usize, k: usize, seed: u64) -> Result<CopyTreeEmbedding> {
    if k == 0 {
        return invalid("tree count must be at least 1");
    }
    let m = prepare(g, r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts = (0..k).map(|_| sample_frt(&m, r, &mut rng)).collect::<Result<Vec<_>>>()?;
    CopyTreeEmbedding::merge(Construction::FrtSupport, g.clone(), m, r, &parts)
}

/// FRT sample embedding that also maps tuples of edge sets.
#[derive(Clone, Debug, PartialEq)]
pub struct DemandRobustEmbedding {
    pub embedding: CopyTreeEmbedding,
    pub scenarios: usize,
    /// Seed actually used after retries.
    pub seed: u64,
    pub attempts: usize,
}

/// `ceil(4 ln(4 n (m + 1)))`.
pub fn demand_robust_tree_count(n: usize, m: usize) -> usize {
    (4.0 * (4.0 * n as f64 * (m as f64 + 1.0)).ln()).ceil().max(1.0) as usize
}

const ROBUST_RETRIES: usize = 10;

pub fn build_demand_robust(g: &WeightedGraph, r: usize, m: usize, seed: u64) -> Result<DemandRobustEmbedding> {
    if m == 0 {
        return invalid("scenario count must be at least 1");
    }
    let metric = prepare(g, r)?;
    let k = demand_robust_tree_count(g.n(), m);
    for attempt in 0..ROBUST_RETRIES {
        let s = seed.wrapping_add(attempt as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let parts = (0..k).map(|_| sample_frt(&metric, r, &mut rng)).collect::<Result<Vec<_>>>()?;
        let embedding = CopyTreeEmbedding::merge(Construction::DemandRobust, g.clone(), metric.clone(), r, &parts)?;
        let out = DemandRobustEmbedding { embedding, scenarios: m, seed: s, attempts: attempt + 1 };
        if super::verify::tuple_check(&out, 8, s).is_ok() {
            return Ok(out);
        }
    }
    Err(Error::ContractViolation("demand-robust embedding failed verification after retries".into()))
}

impl DemandRobustEmbedding {
    /// Maps `(X_0, ..., X_m)`: `X_0` into every constituent, each `X_i` into the
    /// constituent minimizing the joint projected weight with `X_0`.
    pub fn forward_map_tuple(&self, xs: &[EdgeSet]) -> Result<Vec<EdgeSet>> {
        if xs.len() != self.scenarios + 1 {
            return invalid(format!("expected {} edge sets, got {}", self.scenarios + 1, xs.len()));
        }
        let e = &self.embedding;
        let tg = e.tree().graph();
        let first = e.constituent_projections(&xs[0]);
        let mut out = vec![first.iter().fold(EdgeSet::new(), |acc, x| acc.union(x))];
        for x in &xs[1..] {
            let per = e.constituent_projections(x);
            let j = (0..per.len())
                .min_by(|&a, &b| {
                    let ca = first[a].weight(tg) + per[a].weight(tg);
                    let cb = first[b].weight(tg) + per[b].weight(tg);
                    ca.total_cmp(&cb)
                })
                .expect("at least one constituent");
            out.push(per[j].clone());
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts() {
        assert_eq!(demand_robust_tree_count(2, 1), 12);
    }

    #[test]
    fn construction2_single_edge() {
        let g = WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap();
        let e = build_construction2(&g, 0, 3, 7).unwrap();
        assert_eq!(e.phi(1).len(), 3);
        assert_eq!(e.phi(0), &[0]);
        for &x in e.phi(1) {
            assert!(e.tree().distance(0, x) >= 1.0);
        }
        assert!(e.forward_map(&EdgeSet::new()).is_empty());
    }

    #[test]
    fn construction1_single_vertex() {
        let g = WeightedGraph::new(1, []).unwrap();
        let e = build_construction1(&g, 0, 0.25).unwrap();
        assert_eq!(e.tree().n(), 1);
        assert_eq!(e.copy_number(), 1);
    }

    #[test]
    fn tuple_map_shapes() {
        let g = WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap();
        let d = build_demand_robust(&g, 0, 1, 0).unwrap();
        assert_eq!(d.embedding.constituent_count(), 12);
        let out = d.forward_map_tuple(&[EdgeSet::new(), EdgeSet::new()]).unwrap();
        assert!(out.iter().all(EdgeSet::is_empty));
        assert!(d.forward_map_tuple(&[EdgeSet::new()]).is_err());
        let x0: EdgeSet = [0].into_iter().collect();
        let out = d.forward_map_tuple(&[x0, EdgeSet::new()]).unwrap();
        assert_eq!(out[0].len(), 12);
    }
}
