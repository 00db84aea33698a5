use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::copy_tree::{Construction, CopyTreeEmbedding, DemandRobustEmbedding};
use crate::error::{Error, Result};
use crate::graph::{components, is_well_separated, EdgeSet, WeightedGraph, EPS};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub construction: Construction,
    pub n: usize,
    pub tree_nodes: usize,
    pub copy_number: usize,
    pub constituents: usize,
    pub phi_partition: bool,
    pub root_singleton: bool,
    pub well_separated: bool,
    /// Every tree edge is at least the graph distance between its endpoints' originals.
    pub dominating: bool,
    pub trials: usize,
    pub forward_failures: usize,
    pub backward_failures: usize,
    /// Merged-partial only: copies of a vertex joined to `r` by `F` all reach the tree root.
    pub root_property_failures: Option<usize>,
    pub backward_cost_violations: usize,
    pub monotone_failures: usize,
    /// Largest `w'(pi_j(F)) / w(F)` over trials and single constituents.
    pub alpha_fwd: f64,
    /// Largest `w'(forward(F)) / w(F)` for the full forward map.
    pub alpha_fwd_union: f64,
    /// Largest `w(backward(F')) / w'(F')`.
    pub backward_slack: f64,
    pub passed: bool,
}

fn random_subset(m: usize, rng: &mut ChaCha8Rng) -> EdgeSet {
    let q = [0.1, 0.25, 0.5, 0.8][rng.random_range(0..4)];
    (0..m).filter(|_| rng.random_bool(q)).collect()
}

fn grow(f: &EdgeSet, m: usize, rng: &mut ChaCha8Rng) -> EdgeSet {
    let mut out = f.clone();
    out.extend((0..m).filter(|_| rng.random_bool(0.3)));
    out
}

/// Structural checks plus `trials` random edge sets through both maps.
pub fn verify_embedding(e: &CopyTreeEmbedding, trials: usize, seed: u64) -> VerifyReport {
    let g = e.graph();
    let t = e.tree();
    let tg = t.graph();
    let n = g.n();
    let r = e.root();
    let total: usize = (0..n).map(|v| e.phi(v).len()).sum();
    let phi_partition = total == t.n() && (0..n).all(|v| e.phi(v).iter().all(|&x| e.copy_of(x) == v));
    let root_singleton = e.phi(r) == [t.root()];
    let dominating = (0..t.n()).all(|x| match t.parent(x) {
        Some(p) => {
            t.edge_weight(t.parent_edge(x).unwrap()) + EPS >= e.metric().d(e.copy_of(x), e.copy_of(p))
        }
        None => true,
    });
    let merged = e.construction() == Construction::MergedPartial;
    let mut rep = VerifyReport {
        construction: e.construction(),
        n,
        tree_nodes: t.n(),
        copy_number: e.copy_number(),
        constituents: e.constituent_count(),
        phi_partition,
        root_singleton,
        well_separated: is_well_separated(t),
        dominating,
        trials,
        forward_failures: 0,
        backward_failures: 0,
        root_property_failures: merged.then_some(0),
        backward_cost_violations: 0,
        monotone_failures: 0,
        alpha_fwd: 0.0,
        alpha_fwd_union: 0.0,
        backward_slack: 0.0,
        passed: false,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let f = random_subset(g.m(), &mut rng);
        let fp = e.forward_map(&f);
        rep.forward_failures += forward_failures(e, g, &f, &fp);
        if merged {
            let lt = components(tg, &fp);
            let lg = components(g, &f);
            let bad = (0..n).filter(|&u| lg[u] == lg[r] && e.phi(u).iter().any(|&x| lt[x] != lt[t.root()])).count();
            *rep.root_property_failures.as_mut().unwrap() += bad;
            if !fp.is_subset(&e.forward_map(&grow(&f, g.m(), &mut rng))) {
                rep.monotone_failures += 1;
            }
        }
        let wf = f.weight(g);
        if wf > 0.0 {
            rep.alpha_fwd_union = rep.alpha_fwd_union.max(fp.weight(tg) / wf);
            let best_single = if merged {
                e.constituent_projections(&f).iter().map(|x| x.weight(tg)).fold(0.0, f64::max)
            } else {
                fp.weight(tg)
            };
            rep.alpha_fwd = rep.alpha_fwd.max(best_single / wf);
        }

        let fq = random_subset(tg.m(), &mut rng);
        let fb = e.backward_map(&fq);
        let (wb, wq) = (fb.weight(g), fq.weight(tg));
        if wb > wq + EPS {
            rep.backward_cost_violations += 1;
        }
        if wq > 0.0 {
            rep.backward_slack = rep.backward_slack.max(wb / wq);
        }
        rep.backward_failures += backward_failures(e, g, &fq, &fb);
        if !fb.is_subset(&e.backward_map(&grow(&fq, tg.m(), &mut rng))) {
            rep.monotone_failures += 1;
        }
    }
    rep.passed = rep.phi_partition
        && rep.root_singleton
        && rep.well_separated
        && rep.dominating
        && rep.forward_failures == 0
        && rep.backward_failures == 0
        && rep.root_property_failures.unwrap_or(0) == 0
        && rep.backward_cost_violations == 0
        && rep.monotone_failures == 0;
    rep
}

/// Pairs joined by `F` in `G` whose copies share no component of `F'`.
pub(crate) fn forward_failures(e: &CopyTreeEmbedding, g: &WeightedGraph, f: &EdgeSet, fp: &EdgeSet) -> usize {
    let lg = components(g, f);
    let lt = components(e.tree().graph(), fp);
    let mut bad = 0;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if lg[u] == lg[v] && !e.phi(u).iter().any(|&x| e.phi(v).iter().any(|&y| lt[x] == lt[y])) {
                bad += 1;
            }
        }
    }
    bad
}

/// Tree nodes joined by `F'` whose originals are apart under the backward image.
fn backward_failures(e: &CopyTreeEmbedding, g: &WeightedGraph, fq: &EdgeSet, fb: &EdgeSet) -> usize {
    let lt = components(e.tree().graph(), fq);
    let lg = components(g, fb);
    (0..e.tree().n()).filter(|&x| lg[e.copy_of(x)] != lg[e.copy_of(lt[x])]).count()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TupleReport {
    pub trials: usize,
    pub checks: usize,
    pub failures: usize,
}

/// Random tuples through [`DemandRobustEmbedding::forward_map_tuple`]: pairs
/// joined by `X_0 + X_i` must have copies joined by `X'_0 + X'_i`.
pub fn verify_tuple_map(d: &DemandRobustEmbedding, trials: usize, seed: u64) -> TupleReport {
    let e = &d.embedding;
    let g = e.graph();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut rep = TupleReport { trials, checks: 0, failures: 0 };
    for _ in 0..trials {
        let xs: Vec<EdgeSet> = (0..=d.scenarios).map(|_| random_subset(g.m(), &mut rng)).collect();
        let mapped = d.forward_map_tuple(&xs).expect("tuple length matches");
        for i in 1..=d.scenarios {
            rep.checks += 1;
            rep.failures += forward_failures(e, g, &xs[0].union(&xs[i]), &mapped[0].union(&mapped[i]));
        }
    }
    rep
}

pub(crate) fn tuple_check(d: &DemandRobustEmbedding, trials: usize, seed: u64) -> Result<()> {
    let v = verify_embedding(&d.embedding, trials, seed);
    let t = verify_tuple_map(d, trials, seed);
    if v.passed && t.failures == 0 {
        Ok(())
    } else {
        Err(Error::ContractViolation("demand-robust embedding failed verification".into()))
    }
}
