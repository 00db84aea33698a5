use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Dsu, EdgeSet, RootedTree, WeightedGraph};

/// Size limits for the exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleBudget {
    /// Edge count for the subset enumerations on general graphs.
    pub max_edges: usize,
    /// Same, when the graph is a tree.
    pub max_tree_edges: usize,
    /// Edge count for the demand-robust enumeration on general graphs.
    pub max_robust_edges: usize,
    pub max_robust_tree_edges: usize,
    pub max_scenarios: usize,
    /// Group count for the tree DP.
    pub max_groups: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_edges: 18,
            max_tree_edges: 20,
            max_robust_edges: 12,
            max_robust_tree_edges: 16,
            max_scenarios: 3,
            max_groups: 12,
        }
    }
}

impl OracleBudget {
    pub(crate) fn edge_limit(&self, g: &WeightedGraph) -> usize {
        if g.m() + 1 == g.n() {
            self.max_tree_edges
        } else {
            self.max_edges
        }
    }

    pub(crate) fn robust_edge_limit(&self, g: &WeightedGraph) -> usize {
        if g.m() + 1 == g.n() {
            self.max_robust_tree_edges
        } else {
            self.max_robust_edges
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    pub cost: f64,
    pub witness: EdgeSet,
}

pub(crate) fn check_edges(g: &WeightedGraph, limit: usize) -> Result<()> {
    if g.m() > limit {
        return Err(Error::BudgetExceeded(format!("{} edges, oracle limit {limit}", g.m())));
    }
    Ok(())
}

pub(crate) fn check_sets(g: &WeightedGraph, sets: &[&Vec<usize>]) -> Result<()> {
    for s in sets {
        if s.is_empty() {
            return Err(Error::InvalidInput("empty vertex set".into()));
        }
        if let Some(v) = s.iter().find(|&&v| v >= g.n()) {
            return Err(Error::InvalidInput(format!("vertex {v} out of range")));
        }
    }
    Ok(())
}

/// Component labels of the edges selected by `mask`.
pub(crate) fn mask_labels(g: &WeightedGraph, mask: u64) -> Vec<usize> {
    let mut dsu = Dsu::new(g.n());
    let mut rest = mask;
    while rest != 0 {
        let e = g.edge(rest.trailing_zeros() as usize);
        dsu.union(e.u, e.v);
        rest &= rest - 1;
    }
    (0..g.n()).map(|v| dsu.find(v)).collect()
}

pub(crate) fn joined(labels: &[usize], a: &[usize], b: &[usize]) -> bool {
    a.iter().any(|&x| b.iter().any(|&y| labels[x] == labels[y]))
}

/// `w(mask)` for every mask, built from the lowest set bit.
pub(crate) fn mask_weights(g: &WeightedGraph) -> Vec<f64> {
    let m = g.m();
    let mut w = vec![0.0; 1 << m];
    for mask in 1usize..(1 << m) {
        let low = mask.trailing_zeros() as usize;
        w[mask] = w[mask & (mask - 1)] + g.edge(low).w;
    }
    w
}

pub(crate) fn mask_set(mask: u64) -> EdgeSet {
    (0..64).filter(|&b| mask >> b & 1 == 1).collect()
}

/// Cheapest edge set accepted by `feasible`; the first minimal mask wins ties.
fn cheapest(g: &WeightedGraph, feasible: impl Fn(&[usize]) -> bool) -> Result<OracleResult> {
    let weights = mask_weights(g);
    let mut best: Option<(f64, u64)> = None;
    for (mask, &w) in weights.iter().enumerate() {
        if best.is_some_and(|(b, _)| w >= b) {
            continue;
        }
        if feasible(&mask_labels(g, mask as u64)) {
            best = Some((w, mask as u64));
        }
    }
    let (cost, mask) = best.ok_or_else(|| Error::Infeasible("no edge set serves every demand".into()))?;
    Ok(OracleResult { cost, witness: mask_set(mask) })
}

/// Exact group Steiner tree by edge subset enumeration.
pub fn opt_group_steiner_tree(g: &WeightedGraph, root: usize, groups: &[Vec<usize>], budget: &OracleBudget) -> Result<OracleResult> {
    check_edges(g, budget.edge_limit(g))?;
    check_sets(g, &groups.iter().collect::<Vec<_>>())?;
    cheapest(g, |l| groups.iter().all(|gr| gr.iter().any(|&v| l[v] == l[root])))
}

/// Exact group Steiner forest by edge subset enumeration.
pub fn opt_group_steiner_forest(
    g: &WeightedGraph,
    pairs: &[(Vec<usize>, Vec<usize>)],
    budget: &OracleBudget,
) -> Result<OracleResult> {
    check_edges(g, budget.edge_limit(g))?;
    check_sets(g, &pairs.iter().flat_map(|(a, b)| [a, b]).collect::<Vec<_>>())?;
    cheapest(g, |l| pairs.iter().all(|(a, b)| joined(l, a, b)))
}

/// Exact 2-level partial group Steiner tree: for every `(groups, f)` at
/// least `f` of the groups have a vertex joined to the root.
pub fn opt_two_level_partial(
    tree: &RootedTree,
    demands: &[(Vec<Vec<usize>>, usize)],
    budget: &OracleBudget,
) -> Result<OracleResult> {
    let g = tree.graph();
    check_edges(g, budget.edge_limit(g))?;
    for (groups, f) in demands {
        check_sets(g, &groups.iter().collect::<Vec<_>>())?;
        if *f > groups.len() {
            return Err(Error::InvalidInput(format!("requirement {f} exceeds {} groups", groups.len())));
        }
    }
    let r = tree.root();
    cheapest(g, |l| {
        demands.iter().all(|(groups, f)| groups.iter().filter(|gr| gr.iter().any(|&v| l[v] == l[r])).count() >= *f)
    })
}

/// Group Steiner tree on a rooted tree by a DP over (node, covered groups).
pub fn gst_tree_dp(tree: &RootedTree, groups: &[Vec<usize>], budget: &OracleBudget) -> Result<f64> {
    let k = groups.len();
    if k > budget.max_groups {
        return Err(Error::BudgetExceeded(format!("{k} groups, oracle limit {}", budget.max_groups)));
    }
    check_sets(tree.graph(), &groups.iter().collect::<Vec<_>>())?;
    let full = (1usize << k) - 1;
    let mut own = vec![0usize; tree.n()];
    for (j, gr) in groups.iter().enumerate() {
        for &v in gr {
            own[v] |= 1 << j;
        }
    }
    let mut dp: Vec<Vec<f64>> = vec![Vec::new(); tree.n()];
    for &v in tree.order().iter().rev() {
        let mut cur: Vec<f64> = (0..=full).map(|s| if s & !own[v] == 0 { 0.0 } else { f64::INFINITY }).collect();
        for &c in tree.children(v) {
            let w = tree.edge_weight(tree.parent_edge(c).unwrap());
            let child = std::mem::take(&mut dp[c]);
            let mut next = cur.clone();
            for s in 1..=full {
                let mut t = s;
                while t > 0 {
                    let val = cur[s & !t] + w + child[t];
                    if val < next[s] {
                        next[s] = val;
                    }
                    t = (t - 1) & s;
                }
            }
            cur = next;
        }
        dp[v] = cur;
    }
    Ok(dp[tree.root()][full])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_triangle() {
        let b = OracleBudget::default();
        let path = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        assert_eq!(opt_group_steiner_tree(&path, 0, &[vec![2]], &b).unwrap().cost, 3.0);
        let tri = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]).unwrap();
        let r = opt_group_steiner_forest(&tri, &[(vec![0], vec![2])], &b).unwrap();
        assert_eq!(r.cost, 2.0);
        assert_eq!(r.witness.len(), 2);
    }

    #[test]
    fn tree_dp_matches() {
        let t = RootedTree::from_parents(&[None, Some(0), Some(0), Some(1)], &[0.0, 1.0, 4.0, 1.0]).unwrap();
        let groups = vec![vec![2, 3], vec![1]];
        let b = OracleBudget::default();
        assert_eq!(gst_tree_dp(&t, &groups, &b).unwrap(), 2.0);
        assert_eq!(opt_group_steiner_tree(t.graph(), 0, &groups, &b).unwrap().cost, 2.0);
    }

    #[test]
    fn budget_refusal() {
        let b = OracleBudget { max_edges: 1, max_tree_edges: 1, ..OracleBudget::default() };
        let path = WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
        assert!(matches!(opt_group_steiner_tree(&path, 0, &[vec![2]], &b), Err(Error::BudgetExceeded(_))));
    }
}
