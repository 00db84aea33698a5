use serde::Serialize;

use crate::embedding::CopyTreeEmbedding;
use crate::error::{invalid, Error, Result};
use crate::graph::{components, EdgeSet, RootedTree};

const SATURATED: f64 = 1e-9;

/// Fractional edge levels `0 <= x_e <= w_e`; the solution is the root
/// component of the saturated edges.
#[derive(Clone, Debug, PartialEq)]
pub struct WaterFillState {
    x: Vec<f64>,
    reached: Vec<bool>,
    solution: EdgeSet,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WaterFillStep {
    pub iterations: usize,
    /// Groups touched by the solution after the step.
    pub touched: usize,
    pub target: usize,
    pub solution: EdgeSet,
    pub cost: f64,
    /// `sum_e x_e` after the step.
    pub fractional: f64,
}

impl WaterFillState {
    pub fn new(tree: &RootedTree) -> Self {
        let mut reached = vec![false; tree.n()];
        reached[tree.root()] = true;
        Self { x: vec![0.0; tree.graph().m()], reached, solution: EdgeSet::new() }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn total(&self) -> f64 {
        self.x.iter().sum()
    }

    pub fn solution(&self) -> &EdgeSet {
        &self.solution
    }

    /// Whether node `v` is joined to the root by saturated edges.
    pub fn reached(&self, v: usize) -> bool {
        self.reached[v]
    }

    fn touched(&self, groups: &[Vec<usize>]) -> usize {
        groups.iter().filter(|g| g.iter().any(|&v| self.reached[v])).count()
    }

    /// Raises frontier edges until `ceil((1 - eps) f)` groups reach the root.
    pub fn reveal(&mut self, tree: &RootedTree, groups: &[Vec<usize>], f: usize, epsilon: f64) -> Result<WaterFillStep> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return invalid(format!("epsilon {epsilon} must lie in (0, 1)"));
        }
        if f == 0 || f > groups.len() {
            return invalid(format!("requirement {f} must lie in [1, {}]", groups.len()));
        }
        if let Some(v) = groups.iter().flatten().find(|&&v| v >= tree.n()) {
            return invalid(format!("node {v} not in the tree"));
        }
        if groups.iter().any(Vec::is_empty) {
            return invalid("empty group");
        }
        let target = ((1.0 - epsilon) * f as f64 - 1e-12).ceil() as usize;
        let mut iterations = 0;
        while self.touched(groups) < target {
            let mut pending: Vec<usize> = groups
                .iter()
                .filter(|g| !g.iter().any(|&v| self.reached[v]))
                .flatten()
                .copied()
                .collect();
            pending.sort_unstable();
            pending.dedup();
            let mut rate = vec![0usize; self.x.len()];
            for &v in &pending {
                let e = self.frontier(tree, v);
                rate[e] += 1;
            }
            let mut delta = f64::INFINITY;
            let mut arg = usize::MAX;
            for (e, &r) in rate.iter().enumerate() {
                if r > 0 {
                    let d = (tree.edge_weight(e) - self.x[e]) / r as f64;
                    if d < delta {
                        delta = d;
                        arg = e;
                    }
                }
            }
            let before = self.saturated_count(tree);
            for (e, &r) in rate.iter().enumerate() {
                if r > 0 {
                    let w = tree.edge_weight(e);
                    self.x[e] = (self.x[e] + r as f64 * delta).min(w);
                    if e == arg || self.x[e] >= w - SATURATED {
                        self.x[e] = w;
                    }
                }
            }
            if self.saturated_count(tree) <= before {
                return Err(Error::ContractViolation("water filling iteration saturated no edge".into()));
            }
            self.refresh(tree);
            iterations += 1;
        }
        Ok(WaterFillStep {
            iterations,
            touched: self.touched(groups),
            target,
            solution: self.solution.clone(),
            cost: self.solution.weight(tree.graph()),
            fractional: self.total(),
        })
    }

    fn is_saturated(&self, tree: &RootedTree, e: usize) -> bool {
        self.x[e] >= tree.edge_weight(e)
    }

    fn saturated_count(&self, tree: &RootedTree) -> usize {
        (0..self.x.len()).filter(|&e| self.is_saturated(tree, e)).count()
    }

    /// First unsaturated edge on the path from `v` to the root.
    fn frontier(&self, tree: &RootedTree, v: usize) -> usize {
        let mut cur = v;
        loop {
            let e = tree.parent_edge(cur).expect("an unreached node has an unsaturated edge above it");
            if !self.is_saturated(tree, e) {
                return e;
            }
            cur = tree.parent(cur).unwrap();
        }
    }

    fn refresh(&mut self, tree: &RootedTree) {
        let sat: EdgeSet = (0..self.x.len()).filter(|&e| self.is_saturated(tree, e)).collect();
        let labels = components(tree.graph(), &sat);
        let root = labels[tree.root()];
        self.reached = labels.iter().map(|&l| l == root).collect();
        self.solution = sat.iter().filter(|&e| {
            let c = tree.child_of_edge(e);
            self.reached[c]
        })
        .collect();
    }
}

/// Reveals per graph group `g_t` the copy sets `{phi(v) : v in g_t}` to a
/// water-filling state on the copy tree and maps the result back.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartialStep {
    pub step: usize,
    pub target: usize,
    /// Vertices of `g_t` joined to the root by the graph solution.
    pub connected: usize,
    pub solution: EdgeSet,
    pub cost: f64,
    pub tree_cost: f64,
    pub monotone: bool,
}

pub fn partial_gst_general(
    e: &CopyTreeEmbedding,
    stream: &[(Vec<usize>, usize)],
    epsilon: f64,
) -> Result<Vec<PartialStep>> {
    let tree = e.tree();
    let g = e.graph();
    let mut state = WaterFillState::new(tree);
    let mut prev = EdgeSet::new();
    let mut out = Vec::new();
    for (t, (group, f)) in stream.iter().enumerate() {
        if let Some(v) = group.iter().find(|&&v| v >= g.n()) {
            return invalid(format!("vertex {v} out of range"));
        }
        let mut members = group.clone();
        members.sort_unstable();
        members.dedup();
        let sets: Vec<Vec<usize>> = members.iter().map(|&v| e.phi(v).to_vec()).collect();
        let step = state.reveal(tree, &sets, *f, epsilon)?;
        let sol = e.backward_map(&step.solution);
        let labels = components(g, &sol);
        let connected = members.iter().filter(|&&v| labels[v] == labels[e.root()]).count();
        let monotone = prev.is_subset(&sol);
        if connected < step.target || !monotone {
            return Err(Error::ContractViolation(format!("partial step {t} lost connections or edges")));
        }
        out.push(PartialStep {
            step: t,
            target: step.target,
            connected,
            cost: sol.weight(g),
            tree_cost: step.cost,
            solution: sol.clone(),
            monotone,
        });
        prev = sol;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> RootedTree {
        RootedTree::from_parents(&[None, Some(0), Some(0), Some(0)], &[0.0, 1.0, 1.0, 2.0]).unwrap()
    }

    #[test]
    fn star_two_of_three() {
        let t = star();
        let mut s = WaterFillState::new(&t);
        let step = s.reveal(&t, &[vec![1], vec![2], vec![3]], 2, 0.01).unwrap();
        assert_eq!(step.iterations, 1);
        assert_eq!(step.cost, 2.0);
        assert_eq!(step.solution.len(), 2);
        let again = s.reveal(&t, &[vec![1], vec![2]], 2, 0.01).unwrap();
        assert_eq!(again.iterations, 0);
        assert_eq!(again.solution, step.solution);
    }

    #[test]
    fn star_half_target() {
        let t = star();
        let mut s = WaterFillState::new(&t);
        let step = s.reveal(&t, &[vec![1], vec![2], vec![3]], 2, 0.5).unwrap();
        assert_eq!(step.target, 1);
        assert!(step.touched >= 1);
        assert!(s.total() <= 2.0 * 1.5 * 2.0);
    }

    #[test]
    fn rejects_large_requirement() {
        let t = star();
        assert!(WaterFillState::new(&t).reveal(&t, &[vec![1]], 2, 0.5).is_err());
    }
}
