use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::instance::{evaluate_robust, map_robust_instance, ProblemKind, RobustEvaluation, RobustInstance, RobustSolution};
use super::lp_gsf::{build_lp_gsf, LayeredForest};
use super::lp_gst::{build_lp_gst, FractionalSolution};
use super::rounding::{EdgeForest, RoundingState};
use crate::embedding::{build_demand_robust, DemandRobustEmbedding};
use crate::error::{Error, Result};
use crate::graph::{components, EdgeSet, RootedTree, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RoundingOptions {
    /// Overrides the default copy count.
    pub copies: Option<usize>,
    /// `C` in `C * ceil(log^2 n)` (tree) or `C * ceil(log^3 n)` (forest).
    pub multiplier: usize,
    pub seed: u64,
    /// Fresh-seed attempts after the first one fails.
    pub retries: usize,
}

impl Default for RoundingOptions {
    fn default() -> Self {
        Self { copies: None, multiplier: 4, seed: 0, retries: 5 }
    }
}

/// `c * ceil(log2(n)^p)` with `p = 2` for trees and 3 for forests.
pub fn default_copies(n: usize, kind: ProblemKind, c: usize) -> usize {
    let l = (n.max(2) as f64).log2();
    let p = match kind {
        ProblemKind::Tree => 2,
        ProblemKind::Forest => 3,
    };
    (c * (l.powi(p) - 1e-9).ceil() as usize).max(1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RobustRounding {
    pub solution: RobustSolution,
    pub feasible: Vec<bool>,
    pub copies: usize,
}

impl RobustRounding {
    pub fn all_feasible(&self) -> bool {
        self.feasible.iter().all(|&b| b)
    }
}

fn sub_seeds(seed: u64, k: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| rng.random()).collect()
}

/// First stage from `y_0 = x_0`, then per scenario a second feed of the
/// repaired `x_0 + x_i` on a clone of every copy.
fn round_copies(forest: &EdgeForest, x: &FractionalSolution, copies: usize, seed: u64) -> Result<(EdgeSet, Vec<EdgeSet>)> {
    let y0 = forest.repair(&x.x[0]);
    let mut states: Vec<RoundingState> =
        sub_seeds(seed, copies).into_iter().map(|s| RoundingState::new(forest.clone(), s)).collect();
    let mut first = EdgeSet::new();
    for s in &mut states {
        first.union_with(&s.feed(&y0)?);
    }
    let mut second = Vec::with_capacity(x.x.len().saturating_sub(1));
    for xi in &x.x[1..] {
        let sum: Vec<f64> = x.x[0].iter().zip(xi).map(|(a, b)| a + b).collect();
        let y1: Vec<f64> = forest.repair(&sum).iter().zip(&y0).map(|(a, b)| a.max(*b)).collect();
        let mut all = EdgeSet::new();
        for s in &states {
            all.union_with(&s.clone().feed(&y1)?);
        }
        second.push(all.difference(&first));
    }
    Ok((first, second))
}

fn finish(tree: &RootedTree, inst: &RobustInstance, first: EdgeSet, second: Vec<EdgeSet>, copies: usize) -> RobustRounding {
    let g = tree.graph();
    let feasible = inst
        .scenarios
        .iter()
        .zip(&second)
        .map(|(s, xi)| s.served(&components(g, &first.union(xi)), tree.root()))
        .collect();
    RobustRounding { solution: RobustSolution { first_stage: first, second_stage: second }, feasible, copies }
}

pub fn round_robust_gst(
    tree: &RootedTree,
    x: &FractionalSolution,
    inst: &RobustInstance,
    copies: usize,
    seed: u64,
) -> Result<RobustRounding> {
    let forest = EdgeForest::from_tree(tree);
    let (first, second) = round_copies(&forest, x, copies, seed)?;
    Ok(finish(tree, inst, first, second, copies))
}

/// `x` is indexed by the edges of `lf`; the chosen forest edges are
/// projected onto the tree.
pub fn round_robust_gsf(
    tree: &RootedTree,
    lf: &LayeredForest,
    x: &FractionalSolution,
    inst: &RobustInstance,
    copies: usize,
    seed: u64,
) -> Result<RobustRounding> {
    let forest = EdgeForest::from_layered(lf);
    let (first, second) = round_copies(&forest, x, copies, seed)?;
    let first = lf.project(first.iter());
    let second = second.iter().map(|s| lf.project(s.iter()).difference(&first)).collect();
    Ok(finish(tree, inst, first, second, copies))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TreeRun {
    pub kind: ProblemKind,
    pub lp_objective: f64,
    pub lp_vars: usize,
    pub lp_constraints: usize,
    pub rounding: RobustRounding,
    pub evaluation: RobustEvaluation,
    /// Rounding attempts used, counting the first.
    pub attempts: usize,
}

/// LP, rounding and retries on a rooted tree.
pub fn solve_robust_tree(tree: &RootedTree, inst: &RobustInstance, opts: &RoundingOptions) -> Result<TreeRun> {
    let kind = inst.kind().unwrap_or(ProblemKind::Tree);
    let copies = opts.copies.unwrap_or_else(|| default_copies(tree.n(), kind, opts.multiplier));
    let (x, lp_vars, lp_constraints, layered) = match kind {
        ProblemKind::Tree => {
            let lp = build_lp_gst(tree, inst)?;
            (lp.solve()?, lp.lp.num_vars(), lp.lp.constraints().len(), None)
        }
        ProblemKind::Forest => {
            let lp = build_lp_gsf(tree, inst)?;
            (lp.solve()?, lp.lp.num_vars(), lp.lp.constraints().len(), Some(lp.forest))
        }
    };
    let seeds = sub_seeds(opts.seed, opts.retries + 1);
    let mut trace = Vec::new();
    for (attempt, &seed) in seeds.iter().enumerate() {
        let rounding = match &layered {
            None => round_robust_gst(tree, &x, inst, copies, seed)?,
            Some(lf) => round_robust_gsf(tree, lf, &x, inst, copies, seed)?,
        };
        if rounding.all_feasible() {
            let evaluation = evaluate_robust(tree.graph(), tree.root(), &rounding.solution, inst)?;
            return Ok(TreeRun {
                kind,
                lp_objective: x.objective,
                lp_vars,
                lp_constraints,
                rounding,
                evaluation,
                attempts: attempt + 1,
            });
        }
        trace.push(rounding.feasible.iter().filter(|&&b| b).count());
    }
    Err(Error::Infeasible(format!(
        "rounding left scenarios unserved in all {} attempts (served per attempt: {trace:?} of {})",
        seeds.len(),
        inst.m()
    )))
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneralRun {
    #[serde(skip)]
    pub embedding: DemandRobustEmbedding,
    pub tree_run: TreeRun,
    pub solution: RobustSolution,
    pub evaluation: RobustEvaluation,
    /// `w'(X'_i)` on the copy tree, first stage at index 0.
    pub tree_costs: Vec<f64>,
    /// `w(X_i)` in the graph.
    pub graph_costs: Vec<f64>,
}

impl GeneralRun {
    /// `w(X_i) <= w'(X'_i)` for every stage.
    pub fn backward_cost_holds(&self) -> bool {
        self.graph_costs.iter().zip(&self.tree_costs).all(|(a, b)| *a <= *b + 1e-9)
    }
}

/// Demand-robust embedding, lifted instance, tree solver, and the backward
/// map applied to every stage separately.
pub fn solve_robust_general(
    g: &WeightedGraph,
    r: usize,
    inst: &RobustInstance,
    opts: &RoundingOptions,
) -> Result<GeneralRun> {
    inst.validate(g.n())?;
    let embedding = build_demand_robust(g, r, inst.m().max(1), opts.seed)?;
    let lifted = map_robust_instance(inst, &embedding)?;
    let e = &embedding.embedding;
    let tree_run = solve_robust_tree(e.tree(), &lifted, opts)?;
    let ts = &tree_run.rounding.solution;
    let tw = e.tree().graph();
    let first = e.backward_map(&ts.first_stage);
    let second: Vec<EdgeSet> = ts.second_stage.iter().map(|x| e.backward_map(x)).collect();
    let mut tree_costs = vec![ts.first_stage.weight(tw)];
    tree_costs.extend(ts.second_stage.iter().map(|x| x.weight(tw)));
    let mut graph_costs = vec![first.weight(g)];
    graph_costs.extend(second.iter().map(|x| x.weight(g)));
    let solution = RobustSolution { first_stage: first, second_stage: second };
    let evaluation = evaluate_robust(g, r, &solution, inst)?;
    if !evaluation.all_feasible() {
        return Err(Error::ContractViolation("backward map lost a scenario's connectivity".into()));
    }
    Ok(GeneralRun { embedding, tree_run, solution, evaluation, tree_costs, graph_costs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robust::Scenario;

    #[test]
    fn single_edge_first_stage() {
        let t = RootedTree::from_parents(&[None, Some(0)], &[0.0, 1.0]).unwrap();
        let inst = RobustInstance::new(vec![Scenario::groups(2.0, vec![vec![1]])]);
        let run = solve_robust_tree(&t, &inst, &RoundingOptions::default()).unwrap();
        assert_eq!(run.rounding.solution.first_stage.len(), 1);
        assert_eq!(run.evaluation.worst_case, 1.0);
    }

    #[test]
    fn integral_star_pair() {
        let t = RootedTree::from_parents(&[None, Some(0), Some(0)], &[0.0, 1.0, 1.0]).unwrap();
        let inst = RobustInstance::new(vec![Scenario::pairs(1.0, vec![(vec![1], vec![2])])]);
        let run = solve_robust_tree(&t, &inst, &RoundingOptions::default()).unwrap();
        assert_eq!(run.evaluation.worst_case, 2.0);
        assert_eq!(run.attempts, 1);
    }

    #[test]
    fn general_single_edge() {
        let g = WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap();
        let inst = RobustInstance::new(vec![Scenario::groups(1.0, vec![vec![1]])]);
        let run = solve_robust_general(&g, 0, &inst, &RoundingOptions::default()).unwrap();
        assert_eq!(run.evaluation.worst_case, 1.0);
        assert!(run.backward_cost_holds());
        let empty = solve_robust_general(&g, 0, &RobustInstance::default(), &RoundingOptions::default()).unwrap();
        assert_eq!(empty.evaluation.worst_case, 0.0);
    }

    #[test]
    fn copy_counts() {
        assert_eq!(default_copies(4, ProblemKind::Tree, 4), 16);
        assert_eq!(default_copies(4, ProblemKind::Forest, 4), 32);
    }
}
