use serde::Serialize;

use super::instance::{Demands, ProblemKind, RobustInstance};
use super::lp::{solve_lp, Cmp, LinearProgram};
use crate::error::{invalid, Result};
use crate::graph::RootedTree;

/// `x[i][e]`: first stage at `i = 0`, scenario `i` afterwards.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FractionalSolution {
    pub objective: f64,
    pub x: Vec<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct GstLp {
    pub lp: LinearProgram,
    pub z: usize,
    pub x: Vec<Vec<usize>>,
}

impl GstLp {
    pub fn solve(&self) -> Result<FractionalSolution> {
        extract(&self.lp, self.z, &self.x)
    }
}

pub(crate) fn extract(lp: &LinearProgram, z: usize, vars: &[Vec<usize>]) -> Result<FractionalSolution> {
    let sol = solve_lp(lp)?;
    let x = vars.iter().map(|row| row.iter().map(|&v| sol.values[v].clamp(0.0, 1.0)).collect()).collect();
    Ok(FractionalSolution { objective: sol.values[z], x })
}

/// Adds "one unit of flow from `top` to `targets` inside the subtree of `top`".
/// `cap(v)` lists the variables whose sum bounds the edge above `v`; the
/// demand is 1, or the variable `demand` when given.
pub(crate) fn add_flow_demand(
    lp: &mut LinearProgram,
    tree: &RootedTree,
    top: usize,
    targets: &[usize],
    cap: &dyn Fn(usize) -> Vec<usize>,
    demand: Option<usize>,
    tag: &str,
) {
    if targets.contains(&top) {
        return;
    }
    let n = tree.n();
    let mut in_tree = vec![false; n];
    let mut is_target = vec![false; n];
    let mut nodes = Vec::new();
    for &t in targets {
        is_target[t] = true;
        let mut v = t;
        while v != top && !in_tree[v] {
            in_tree[v] = true;
            nodes.push(v);
            v = tree.parent(v).expect("target lies below top");
        }
    }
    nodes.sort_unstable();
    let mut flow = vec![usize::MAX; n];
    for &v in &nodes {
        flow[v] = lp.add_var(format!("fl_{tag}_v{v}"), 0.0, f64::INFINITY, 0.0);
        let mut row = vec![(flow[v], 1.0)];
        row.extend(cap(v).into_iter().map(|c| (c, -1.0)));
        lp.add_constraint(row, Cmp::Le, 0.0);
    }
    let mut sinks = Vec::new();
    for &v in &nodes {
        let mut row = vec![(flow[v], 1.0)];
        for &c in tree.children(v) {
            if in_tree[c] {
                row.push((flow[c], -1.0));
            }
        }
        if is_target[v] {
            let s = lp.add_var(format!("s_{tag}_v{v}"), 0.0, f64::INFINITY, 0.0);
            sinks.push((s, 1.0));
            row.push((s, -1.0));
        }
        lp.add_constraint(row, Cmp::Eq, 0.0);
    }
    match demand {
        Some(f) => {
            sinks.push((f, -1.0));
            lp.add_constraint(sinks, Cmp::Ge, 0.0);
        }
        None => lp.add_constraint(sinks, Cmp::Ge, 1.0),
    }
}

/// Robust group Steiner tree LP on a rooted tree: minimize `z` subject to
/// the per-scenario cost bounds, unit root flow to every group through
/// `x_0 + x_i`, and `x_0` decreasing away from the root.
pub fn build_lp_gst(tree: &RootedTree, inst: &RobustInstance) -> Result<GstLp> {
    if inst.kind() == Some(ProblemKind::Forest) {
        return invalid("tree LP needs group scenarios");
    }
    inst.validate(tree.n())?;
    let g = tree.graph();
    let m = inst.m();
    let mut lp = LinearProgram::new();
    let z = lp.add_var("z", 0.0, f64::INFINITY, 1.0);
    let x: Vec<Vec<usize>> =
        (0..=m).map(|i| (0..g.m()).map(|e| lp.add_var(format!("x{i}_e{e}"), 0.0, 1.0, 0.0)).collect()).collect();
    for v in 0..tree.n() {
        if let (Some(e), Some(p)) = (tree.parent_edge(v), tree.parent(v)) {
            if let Some(pe) = tree.parent_edge(p) {
                lp.add_constraint(vec![(x[0][pe], 1.0), (x[0][e], -1.0)], Cmp::Ge, 0.0);
            }
        }
    }
    for (i, s) in inst.scenarios.iter().enumerate() {
        let i = i + 1;
        let mut row: Vec<(usize, f64)> = Vec::with_capacity(2 * g.m() + 1);
        for e in 0..g.m() {
            let w = g.edge(e).w;
            row.push((x[0][e], w));
            row.push((x[i][e], s.sigma * w));
        }
        row.push((z, -1.0));
        lp.add_constraint(row, Cmp::Le, 0.0);
        let Demands::Groups { groups } = &s.demands else { unreachable!() };
        for (j, grp) in groups.iter().enumerate() {
            let cap = |v: usize| {
                let e = tree.parent_edge(v).unwrap();
                vec![x[0][e], x[i][e]]
            };
            add_flow_demand(&mut lp, tree, tree.root(), grp, &cap, None, &format!("s{i}_g{j}"));
        }
    }
    Ok(GstLp { lp, z, x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robust::Scenario;

    fn solve(tree: &RootedTree, inst: &RobustInstance) -> f64 {
        build_lp_gst(tree, inst).unwrap().solve().unwrap().objective
    }

    #[test]
    fn single_edge() {
        let t = RootedTree::from_parents(&[None, Some(0)], &[0.0, 1.0]).unwrap();
        let inst = RobustInstance::new(vec![Scenario::groups(2.0, vec![vec![1]])]);
        assert!((solve(&t, &inst) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn path_two_scenarios() {
        let t = RootedTree::from_parents(&[None, Some(0), Some(1)], &[0.0, 1.0, 1.0]).unwrap();
        let inst = RobustInstance::new(vec![
            Scenario::groups(3.0, vec![vec![1]]),
            Scenario::groups(3.0, vec![vec![2]]),
        ]);
        assert!((solve(&t, &inst) - 2.0).abs() < 1e-7);
    }

    #[test]
    fn root_groups_and_empty() {
        let t = RootedTree::from_parents(&[None, Some(0)], &[0.0, 1.0]).unwrap();
        assert_eq!(solve(&t, &RobustInstance::default()), 0.0);
        let inst = RobustInstance::new(vec![Scenario::groups(2.0, vec![vec![0, 1]])]);
        assert!(solve(&t, &inst).abs() < 1e-9);
    }
}
