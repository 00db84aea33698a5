use std::collections::HashMap;

use serde::Serialize;

use super::instance::{Demands, ProblemKind, RobustInstance};
use super::lp::{Cmp, LinearProgram};
use super::lp_gst::{add_flow_demand, extract, FractionalSolution};
use crate::error::{invalid, Result};
use crate::graph::{EdgeSet, RootedTree};

/// Copy of tree edge `edge` (above node `child`) in layer `level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ForestEdge {
    pub level: usize,
    pub edge: usize,
    pub child: usize,
    /// The forest edge directly above, in the same layer.
    pub parent: Option<usize>,
}

/// Layer `l` keeps the nodes of depth at least `l`; its trees hang from
/// the depth-`l` nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct LayeredForest {
    pub edges: Vec<ForestEdge>,
    index: HashMap<(usize, usize), usize>,
}

impl LayeredForest {
    pub fn new(tree: &RootedTree) -> Self {
        let mut edges = Vec::new();
        let mut index = HashMap::new();
        for level in 0..tree.max_depth() {
            for &v in tree.order() {
                if tree.depth(v) <= level {
                    continue;
                }
                let p = tree.parent(v).unwrap();
                let parent = if tree.depth(p) > level { Some(index[&(level, p)]) } else { None };
                index.insert((level, v), edges.len());
                edges.push(ForestEdge { level, edge: tree.parent_edge(v).unwrap(), child: v, parent });
            }
        }
        Self { edges, index }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Forest edge above `child` in layer `level`.
    pub fn edge_at(&self, level: usize, child: usize) -> Option<usize> {
        self.index.get(&(level, child)).copied()
    }

    /// Tree edges used by a set of forest edges.
    pub fn project(&self, fs: impl IntoIterator<Item = usize>) -> EdgeSet {
        fs.into_iter().map(|f| self.edges[f].edge).collect()
    }
}

#[derive(Clone, Debug)]
pub struct GsfLp {
    pub lp: LinearProgram,
    pub forest: LayeredForest,
    pub z: usize,
    /// `x[i][f]` per forest edge `f`.
    pub x: Vec<Vec<usize>>,
}

impl GsfLp {
    pub fn solve(&self) -> Result<FractionalSolution> {
        extract(&self.lp, self.z, &self.x)
    }
}

fn ancestors(tree: &RootedTree, vs: &[usize]) -> Vec<bool> {
    let mut mark = vec![false; tree.n()];
    for &v in vs {
        let mut cur = Some(v);
        while let Some(c) = cur {
            if mark[c] {
                break;
            }
            mark[c] = true;
            cur = tree.parent(c);
        }
    }
    mark
}

fn below(tree: &RootedTree, top: usize, vs: &[usize]) -> Vec<usize> {
    vs.iter()
        .copied()
        .filter(|&v| {
            let mut cur = v;
            while tree.depth(cur) > tree.depth(top) {
                cur = tree.parent(cur).unwrap();
            }
            cur == top
        })
        .collect()
}

/// Robust group Steiner forest LP on the layered forest of a tree. A pair is
/// served by routing a unit, split over the layer trees containing both
/// sides, from each tree's root to either side.
pub fn build_lp_gsf(tree: &RootedTree, inst: &RobustInstance) -> Result<GsfLp> {
    if inst.kind() == Some(ProblemKind::Tree) {
        return invalid("forest LP needs pair scenarios");
    }
    inst.validate(tree.n())?;
    let g = tree.graph();
    let forest = LayeredForest::new(tree);
    let m = inst.m();
    let mut lp = LinearProgram::new();
    let z = lp.add_var("z", 0.0, f64::INFINITY, 1.0);
    let x: Vec<Vec<usize>> = (0..=m)
        .map(|i| {
            forest
                .edges
                .iter()
                .map(|fe| lp.add_var(format!("x{i}_l{}_e{}", fe.level, fe.edge), 0.0, 1.0, 0.0))
                .collect()
        })
        .collect();
    for (f, fe) in forest.edges.iter().enumerate() {
        if let Some(p) = fe.parent {
            lp.add_constraint(vec![(x[0][p], 1.0), (x[0][f], -1.0)], Cmp::Ge, 0.0);
        }
    }
    for (i, s) in inst.scenarios.iter().enumerate() {
        let i = i + 1;
        let mut row: Vec<(usize, f64)> = Vec::with_capacity(2 * forest.len() + 1);
        for (f, fe) in forest.edges.iter().enumerate() {
            let w = g.edge(fe.edge).w;
            row.push((x[0][f], w));
            row.push((x[i][f], s.sigma * w));
        }
        row.push((z, -1.0));
        lp.add_constraint(row, Cmp::Le, 0.0);
        let Demands::Pairs { pairs } = &s.demands else { unreachable!() };
        for (j, (a, b)) in pairs.iter().enumerate() {
            let (ma, mb) = (ancestors(tree, a), ancestors(tree, b));
            let mut split = Vec::new();
            for top in 0..tree.n() {
                if !(ma[top] && mb[top]) {
                    continue;
                }
                let level = tree.depth(top);
                let f = lp.add_var(format!("f_s{i}_p{j}_t{top}"), 0.0, 1.0, 0.0);
                split.push((f, 1.0));
                let cap = |v: usize| {
                    let fe = forest.edge_at(level, v).unwrap();
                    vec![x[0][fe], x[i][fe]]
                };
                for (side, set) in [("a", a), ("b", b)] {
                    let targets = below(tree, top, set);
                    add_flow_demand(&mut lp, tree, top, &targets, &cap, Some(f), &format!("s{i}_p{j}_t{top}_{side}"));
                }
            }
            lp.add_constraint(split, Cmp::Ge, 1.0);
        }
    }
    Ok(GsfLp { lp, forest, z, x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robust::Scenario;

    fn star() -> RootedTree {
        RootedTree::from_parents(&[None, Some(0), Some(0)], &[0.0, 1.0, 1.0]).unwrap()
    }

    #[test]
    fn forest_layers() {
        let t = RootedTree::from_parents(&[None, Some(0), Some(1)], &[0.0, 1.0, 1.0]).unwrap();
        let lf = LayeredForest::new(&t);
        // layer 0 has both edges, layer 1 the lower one
        assert_eq!(lf.len(), 3);
        assert_eq!(lf.edges[lf.edge_at(0, 2).unwrap()].parent, lf.edge_at(0, 1));
        assert_eq!(lf.edges[lf.edge_at(1, 2).unwrap()].parent, None);
    }

    #[test]
    fn star_pair() {
        let inst = RobustInstance::new(vec![Scenario::pairs(2.0, vec![(vec![1], vec![2])])]);
        let sol = build_lp_gsf(&star(), &inst).unwrap().solve().unwrap();
        assert!((sol.objective - 2.0).abs() < 1e-7);
    }

    #[test]
    fn overlapping_sides_are_free() {
        let inst = RobustInstance::new(vec![Scenario::pairs(2.0, vec![(vec![1, 2], vec![2])])]);
        let sol = build_lp_gsf(&star(), &inst).unwrap().solve().unwrap();
        assert!(sol.objective.abs() < 1e-9);
    }
}
