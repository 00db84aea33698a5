use serde::Serialize;

use super::steiner::{check_edges, joined, mask_labels, mask_set, mask_weights, OracleBudget};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::robust::{Demands, RobustInstance, RobustSolution};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RobustOracle {
    pub cost: f64,
    pub solution: RobustSolution,
}

/// Exact demand-robust optimum. For every scenario `g_i(S)` is the cheapest
/// feasible superset of `S` (a superset-min transform over the subset
/// lattice); the answer is `min_S max_i w(S) + sigma_i (g_i(S) - w(S))`.
pub fn opt_robust(g: &WeightedGraph, root: usize, inst: &RobustInstance, budget: &OracleBudget) -> Result<RobustOracle> {
    check_edges(g, budget.robust_edge_limit(g))?;
    inst.validate(g.n())?;
    if inst.m() > budget.max_scenarios {
        return Err(Error::BudgetExceeded(format!("{} scenarios, oracle limit {}", inst.m(), budget.max_scenarios)));
    }
    let e = g.m();
    let size = 1usize << e;
    let weights = mask_weights(g);
    let m = inst.m();
    let mut best = vec![vec![f64::INFINITY; size]; m];
    let mut arg = vec![vec![0u32; size]; m];
    for mask in 0..size {
        let labels = mask_labels(g, mask as u64);
        for (i, s) in inst.scenarios.iter().enumerate() {
            let ok = match &s.demands {
                Demands::Groups { groups } => groups.iter().all(|gr| gr.iter().any(|&v| labels[v] == labels[root])),
                Demands::Pairs { pairs } => pairs.iter().all(|(a, b)| joined(&labels, a, b)),
            };
            if ok {
                best[i][mask] = weights[mask];
                arg[i][mask] = mask as u32;
            }
        }
    }
    for i in 0..m {
        for b in 0..e {
            let bit = 1 << b;
            for mask in 0..size {
                if mask & bit == 0 && best[i][mask | bit] < best[i][mask] {
                    best[i][mask] = best[i][mask | bit];
                    arg[i][mask] = arg[i][mask | bit];
                }
            }
        }
    }
    let mut opt = (f64::INFINITY, 0usize);
    for x0 in 0..size {
        let w0 = weights[x0];
        let worst = inst
            .scenarios
            .iter()
            .enumerate()
            .map(|(i, s)| w0 + s.sigma * (best[i][x0] - w0))
            .fold(0.0, f64::max);
        if worst < opt.0 {
            opt = (worst, x0);
        }
    }
    let x0 = opt.1;
    let first_stage = mask_set(x0 as u64);
    let second_stage = (0..m).map(|i| mask_set((arg[i][x0] as usize & !x0) as u64)).collect();
    Ok(RobustOracle { cost: opt.0, solution: RobustSolution { first_stage, second_stage } })
}
