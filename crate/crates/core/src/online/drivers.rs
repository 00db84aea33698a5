use serde::Serialize;

use super::greedy::{TreeGroupForest, TreeGroupSteiner};
use crate::embedding::CopyTreeEmbedding;
use crate::error::{Error, Result};
use crate::graph::{components, sets_connected, EdgeSet, WeightedGraph};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepReport {
    pub step: usize,
    /// Weight of the tree-side solution.
    pub tree_cost: f64,
    /// Graph solution after this step.
    pub solution: EdgeSet,
    pub cost: f64,
    /// Every demand revealed so far is served.
    pub feasible: bool,
    pub monotone: bool,
}

fn violation(msg: impl Into<String>) -> Error {
    Error::ContractViolation(msg.into())
}

/// Lifts each group through `phi`, feeds the tree algorithm and maps its
/// solution back to the graph.
pub fn online_gst_driver(
    e: &CopyTreeEmbedding,
    solver: &mut dyn TreeGroupSteiner,
    stream: &[Vec<usize>],
) -> Result<Vec<StepReport>> {
    let g = e.graph();
    let troot = e.tree().root();
    let mut prev_tree = EdgeSet::new();
    let mut prev = EdgeSet::new();
    let mut out = Vec::with_capacity(stream.len());
    for (t, group) in stream.iter().enumerate() {
        check_vertices(g, group)?;
        let lifted = e.lift(group);
        let tree_sol = solver.connect_group(&lifted)?.clone();
        let lt = components(e.tree().graph(), &tree_sol);
        if !lifted.iter().any(|&x| lt[x] == lt[troot]) {
            return Err(violation(format!("tree solver left group {t} unconnected")));
        }
        if !prev_tree.is_subset(&tree_sol) {
            return Err(violation("tree solver dropped edges"));
        }
        let sol = e.backward_map(&tree_sol);
        let labels = components(g, &sol);
        let feasible = stream[..=t].iter().all(|gr| sets_connected(&labels, gr, &[e.root()]));
        let monotone = prev.is_subset(&sol);
        if !feasible || !monotone {
            return Err(violation(format!("graph solution at step {t} infeasible or not monotone")));
        }
        out.push(StepReport {
            step: t,
            tree_cost: tree_sol.weight(e.tree().graph()),
            cost: sol.weight(g),
            solution: sol.clone(),
            feasible,
            monotone,
        });
        prev_tree = tree_sol;
        prev = sol;
    }
    Ok(out)
}

/// Forest counterpart: each pair `(A, B)` is lifted side by side.
pub fn online_gsf_driver(
    e: &CopyTreeEmbedding,
    solver: &mut dyn TreeGroupForest,
    stream: &[(Vec<usize>, Vec<usize>)],
) -> Result<Vec<StepReport>> {
    let g = e.graph();
    let mut prev_tree = EdgeSet::new();
    let mut prev = EdgeSet::new();
    let mut out = Vec::with_capacity(stream.len());
    for (t, (a, b)) in stream.iter().enumerate() {
        check_vertices(g, a)?;
        check_vertices(g, b)?;
        let (la, lb) = (e.lift(a), e.lift(b));
        let tree_sol = solver.connect_pair(&la, &lb)?.clone();
        if !sets_connected(&components(e.tree().graph(), &tree_sol), &la, &lb) {
            return Err(violation(format!("tree solver left pair {t} unconnected")));
        }
        if !prev_tree.is_subset(&tree_sol) {
            return Err(violation("tree solver dropped edges"));
        }
        let sol = e.backward_map(&tree_sol);
        let labels = components(g, &sol);
        let feasible = stream[..=t].iter().all(|(a, b)| sets_connected(&labels, a, b));
        let monotone = prev.is_subset(&sol);
        if !feasible || !monotone {
            return Err(violation(format!("graph solution at step {t} infeasible or not monotone")));
        }
        out.push(StepReport {
            step: t,
            tree_cost: tree_sol.weight(e.tree().graph()),
            cost: sol.weight(g),
            solution: sol.clone(),
            feasible,
            monotone,
        });
        prev_tree = tree_sol;
        prev = sol;
    }
    Ok(out)
}

fn check_vertices(g: &WeightedGraph, vs: &[usize]) -> Result<()> {
    if vs.is_empty() {
        return Err(Error::InvalidInput("empty group".into()));
    }
    match vs.iter().find(|&&v| v >= g.n()) {
        Some(v) => Err(Error::InvalidInput(format!("vertex {v} out of range"))),
        None => Ok(()),
    }
}

/// Graph and groups after making the groups pairwise disjoint.
#[derive(Clone, Debug, PartialEq)]
pub struct DisjointGroups {
    pub graph: WeightedGraph,
    pub groups: Vec<Vec<usize>>,
    /// Edges with id below this are the original edges.
    pub original_edges: usize,
    /// Factor applied to the original weights.
    pub scale: f64,
}

/// When groups overlap, scales all weights by `n^3` and gives every repeated
/// membership its own satellite leaf on a weight-1 edge.
pub fn disjoint_groups_gadget(g: &WeightedGraph, groups: &[Vec<usize>]) -> Result<DisjointGroups> {
    for gr in groups {
        check_vertices(g, gr)?;
    }
    let mut owner = vec![None; g.n()];
    let mut overlap = false;
    for (t, gr) in groups.iter().enumerate() {
        for &v in gr {
            match owner[v] {
                Some(o) if o != t => overlap = true,
                _ => owner[v] = Some(t),
            }
        }
    }
    if !overlap {
        return Ok(DisjointGroups { graph: g.clone(), groups: groups.to_vec(), original_edges: g.m(), scale: 1.0 });
    }
    let scale = (g.n() as f64).powi(3);
    let mut edges: Vec<(usize, usize, f64)> = g.edges().iter().map(|e| (e.u, e.v, e.w * scale)).collect();
    let mut n = g.n();
    let mut out_groups = Vec::with_capacity(groups.len());
    for gr in groups {
        let mut members = Vec::with_capacity(gr.len());
        for &v in gr {
            edges.push((v, n, 1.0));
            members.push(n);
            n += 1;
        }
        out_groups.push(members);
    }
    let mut graph = WeightedGraph::new(n, edges)?;
    if let Some(r) = g.root() {
        graph = graph.with_root(r)?;
    }
    Ok(DisjointGroups { graph, groups: out_groups, original_edges: g.m(), scale })
}

impl DisjointGroups {
    /// Drops satellite edges from a solution on the gadget graph.
    pub fn restrict(&self, sol: &EdgeSet) -> EdgeSet {
        sol.iter().filter(|&e| e < self.original_edges).collect()
    }
}
