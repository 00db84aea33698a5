use crate::decomposition::{is_alpha_padded, tree_of, HierarchicalDecomposition};
use crate::error::{Error, Result};
use crate::graph::{components, EdgeSet, Metric, RootedTree, WeightedGraph};

/// A well-separated tree on a subset `V'` of the vertices, rooted at `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialTreeEmbedding {
    pub tree: RootedTree,
    /// Graph vertex of each tree node.
    pub vertex_of: Vec<usize>,
    /// Tree node of each graph vertex in `V'`.
    pub local_of: Vec<Option<usize>>,
    /// Largest measured `d_T(u, v) / d(u, v)` over pairs of `V'`.
    pub gamma: f64,
}

/// Contracts the decomposition tree onto the padded vertices and scales by 4.
pub fn partial_tree_from(
    m: &Metric,
    hd: &HierarchicalDecomposition,
    r: usize,
    alpha: f64,
) -> Result<PartialTreeEmbedding> {
    if !is_alpha_padded(m, hd, r, alpha) {
        return Err(Error::Precondition(format!("root {r} is not {alpha}-padded")));
    }
    let keep: Vec<bool> = (0..m.n()).map(|v| is_alpha_padded(m, hd, v, alpha)).collect();
    Ok(contract(m, hd, r, &keep))
}

/// The contraction itself. Every node on the path from `r`'s leaf to the top
/// represents `r`; every other surviving node represents the smallest kept
/// vertex below it. Nodes without kept vertices below are dropped.
pub(crate) fn contract(m: &Metric, hd: &HierarchicalDecomposition, r: usize, keep: &[bool]) -> PartialTreeEmbedding {
    let th = tree_of(hd);
    let t = &th.tree;
    let nodes = t.n();
    let mut smallest: Vec<Option<usize>> = vec![None; nodes];
    for v in (0..m.n()).filter(|&v| keep[v]) {
        smallest[th.leaf[v]] = Some(v);
    }
    for &x in t.order().iter().rev() {
        if let (Some(p), Some(s)) = (t.parent(x), smallest[x]) {
            smallest[p] = Some(smallest[p].map_or(s, |q| q.min(s)));
        }
    }
    let mut rep = smallest.clone();
    let mut cur = Some(th.leaf[r]);
    while let Some(x) = cur {
        rep[x] = Some(r);
        cur = t.parent(x);
    }
    let kept: Vec<usize> = (0..m.n()).filter(|&v| keep[v]).collect();
    let mut local_of = vec![None; m.n()];
    for (i, &v) in kept.iter().enumerate() {
        local_of[v] = Some(i);
    }
    let mut parents = vec![None; kept.len()];
    let mut weights = vec![0.0; kept.len()];
    for &x in t.order() {
        let (Some(p), Some(a)) = (t.parent(x), rep[x]) else { continue };
        let b = rep[p].expect("ancestors of kept nodes are kept");
        if a != b {
            let child = local_of[a].unwrap();
            parents[child] = local_of[b];
            weights[child] = 4.0 * t.edge_weight(t.parent_edge(x).unwrap());
        }
    }
    let tree = RootedTree::from_parents(&parents, &weights).expect("contraction of a tree is a tree");
    let mut gamma: f64 = 1.0;
    for (i, &u) in kept.iter().enumerate() {
        for (j, &v) in kept.iter().enumerate().skip(i + 1) {
            gamma = gamma.max(tree.distance(i, j) / m.d(u, v));
        }
    }
    PartialTreeEmbedding { tree, vertex_of: kept, local_of, gamma }
}

/// For each component of `F`, the minimal subtree spanning its `V'` vertices.
pub fn project_to_tree(p: &PartialTreeEmbedding, g: &WeightedGraph, f: &EdgeSet) -> EdgeSet {
    project_components(g, f, |v| p.local_of[v], |nodes| p.tree.minimal_subtree(nodes))
}

pub(crate) fn project_components(
    g: &WeightedGraph,
    f: &EdgeSet,
    node: impl Fn(usize) -> Option<usize>,
    span: impl Fn(&[usize]) -> EdgeSet,
) -> EdgeSet {
    let labels = components(g, f);
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in f.vertices(g) {
        if let Some(x) = node(v) {
            groups.entry(labels[v]).or_default().push(x);
        }
    }
    let mut out = EdgeSet::new();
    for nodes in groups.values().filter(|n| n.len() >= 2) {
        out.union_with(&span(nodes));
    }
    out
}

/// Union of one shortest path in `G` per tree edge.
pub fn project_to_graph(p: &PartialTreeEmbedding, g: &WeightedGraph, m: &Metric, fp: &EdgeSet) -> EdgeSet {
    let mut out = EdgeSet::new();
    for e in fp.iter() {
        let child = p.tree.child_of_edge(e);
        let parent = p.tree.parent(child).unwrap();
        out.extend(m.shortest_path(g, p.vertex_of[child], p.vertex_of[parent]));
    }
    out
}
