//! Weighted graphs, rooted trees, metrics and connectivity.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Absolute tolerance for distance comparisons.
pub const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected multigraph with positive weights and an optional root.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    root: Option<usize>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let edges: Vec<Edge> = edges.into_iter().map(|(u, v, w)| Edge { u, v, w }).collect();
        let mut adj = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return invalid(format!("edge {id} has an endpoint outside [0, {n})"));
            }
            if e.u == e.v {
                return invalid(format!("edge {id} is a self-loop"));
            }
            if !(e.w.is_finite() && e.w > 0.0) {
                return invalid(format!("edge {id} has non-positive weight {}", e.w));
            }
            adj[e.u].push((e.v, id));
            adj[e.v].push((e.u, id));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { n, edges, root: None, adj })
    }

    pub fn with_root(mut self, r: usize) -> Result<Self> {
        if r >= self.n {
            return invalid(format!("root {r} outside [0, {})", self.n));
        }
        self.root = Some(r);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Edge {
        self.edges[id]
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    /// `(neighbour, edge id)` pairs sorted by neighbour.
    pub fn adj(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn min_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).fold(f64::INFINITY, f64::min)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn is_connected(&self) -> bool {
        let labels = components(self, &EdgeSet::all(self));
        labels.iter().all(|&c| c == labels[0])
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.n == 0 {
            return invalid("graph has no vertices");
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.m() > 0 && self.min_weight() < 1.0 - EPS {
            return invalid("edge weights must be at least 1 (normalize first)");
        }
        Ok(())
    }
}

/// Set of edge ids of some graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeSet(BTreeSet<usize>);

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn all(g: &WeightedGraph) -> Self {
        (0..g.m()).collect()
    }

    pub fn insert(&mut self, e: usize) -> bool {
        self.0.insert(e)
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.contains(&e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn union_with(&mut self, other: &EdgeSet) {
        self.0.extend(other.0.iter().copied());
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        self.0.difference(&other.0).copied().collect()
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn weight(&self, g: &WeightedGraph) -> f64 {
        self.iter().fold(0.0, |acc, e| acc + g.edges[e].w)
    }

    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        match self.0.iter().next_back() {
            Some(&e) if e >= g.m() => invalid(format!("edge id {e} out of range")),
            _ => Ok(()),
        }
    }

    pub fn vertices(&self, g: &WeightedGraph) -> BTreeSet<usize> {
        self.iter().flat_map(|e| [g.edges[e].u, g.edges[e].v]).collect()
    }
}

impl FromIterator<usize> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        EdgeSet(iter.into_iter().collect())
    }
}

impl Extend<usize> for EdgeSet {
    fn extend<I: IntoIterator<Item = usize>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = &'a usize;
    type IntoIter = std::collections::btree_set::Iter<'a, usize>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the two classes; the smaller id becomes the representative.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        true
    }
}

/// Component label (smallest vertex id of the component) for every vertex of `(V, F)`.
pub fn components(g: &WeightedGraph, f: &EdgeSet) -> Vec<usize> {
    let mut dsu = Dsu::new(g.n);
    for e in f.iter() {
        let e = g.edges[e];
        dsu.union(e.u, e.v);
    }
    (0..g.n).map(|v| dsu.find(v)).collect()
}

/// Whether some `u` in `us` and `w` in `ws` share a component of `(V, F)`.
pub fn connected(g: &WeightedGraph, f: &EdgeSet, us: &[usize], ws: &[usize]) -> bool {
    let labels = components(g, f);
    sets_connected(&labels, us, ws)
}

pub(crate) fn sets_connected(labels: &[usize], us: &[usize], ws: &[usize]) -> bool {
    let left: BTreeSet<usize> = us.iter().map(|&u| labels[u]).collect();
    ws.iter().any(|&w| left.contains(&labels[w]))
}

/// All-pairs shortest paths with deterministic predecessor choice.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    n: usize,
    dist: Vec<f64>,
    pred: Vec<Option<usize>>,
    diameter: f64,
}

pub fn shortest_path_metric(g: &WeightedGraph) -> Result<Metric> {
    g.require_connected()?;
    let n = g.n;
    let mut dist = vec![f64::INFINITY; n * n];
    let mut pred = vec![None; n * n];
    for s in 0..n {
        let d = &mut dist[s * n..(s + 1) * n];
        let p = &mut pred[s * n..(s + 1) * n];
        let mut pred_vertex = vec![usize::MAX; n];
        let mut done = vec![false; n];
        d[s] = 0.0;
        for _ in 0..n {
            let mut best = None;
            for v in 0..n {
                if !done[v] && d[v].is_finite() && best.is_none_or(|b: usize| d[v] < d[b]) {
                    best = Some(v);
                }
            }
            let Some(u) = best else { break };
            done[u] = true;
            for &(v, e) in &g.adj[u] {
                if done[v] {
                    continue;
                }
                let nd = d[u] + g.edges[e].w;
                let better = nd < d[v] - EPS || ((nd - d[v]).abs() <= EPS && u < pred_vertex[v]);
                if better {
                    d[v] = nd.min(d[v]);
                    p[v] = Some(e);
                    pred_vertex[v] = u;
                }
            }
        }
    }
    let diameter = dist.iter().copied().fold(0.0, f64::max);
    Ok(Metric { n, dist, pred, diameter })
}

impl Metric {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self, u: usize, v: usize) -> f64 {
        self.dist[u * self.n + v]
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Closed ball `{u : d(v, u) <= x}`.
    pub fn ball(&self, v: usize, x: f64) -> Vec<usize> {
        (0..self.n).filter(|&u| self.d(v, u) <= x + EPS).collect()
    }

    /// Edge ids of the chosen shortest `u`-`v` path.
    pub fn shortest_path(&self, g: &WeightedGraph, u: usize, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = v;
        while cur != u {
            let e = self.pred[u * self.n + cur].expect("metric built from a connected graph");
            out.push(e);
            cur = g.edges[e].other(cur);
        }
        out.reverse();
        out
    }
}

/// A tree on vertices `0..n` hanging from `root`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootedTree {
    graph: WeightedGraph,
    root: usize,
    parent: Vec<Option<usize>>,
    parent_edge: Vec<Option<usize>>,
    depth: Vec<usize>,
    dist_root: Vec<f64>,
    children: Vec<Vec<usize>>,
    order: Vec<usize>,
}

impl RootedTree {
    pub fn from_graph(g: WeightedGraph, root: usize) -> Result<Self> {
        let n = g.n();
        if root >= n {
            return invalid(format!("root {root} outside [0, {n})"));
        }
        if g.m() + 1 != n {
            return Err(Error::NotATree(format!("{} edges on {} vertices", g.m(), n)));
        }
        let mut parent = vec![None; n];
        let mut parent_edge = vec![None; n];
        let mut depth = vec![0; n];
        let mut dist_root = vec![0.0; n];
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let mut order = vec![root];
        seen[root] = true;
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &(v, e) in g.adj(u) {
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                parent[v] = Some(u);
                parent_edge[v] = Some(e);
                depth[v] = depth[u] + 1;
                dist_root[v] = dist_root[u] + g.edge(e).w;
                children[u].push(v);
                order.push(v);
            }
        }
        if order.len() != n {
            return Err(Error::NotATree("not connected".into()));
        }
        let graph = g.with_root(root)?;
        Ok(Self { graph, root, parent, parent_edge, depth, dist_root, children, order })
    }

    /// Builds the tree whose edge `i` joins `child` to `parents[child]`, in child order.
    pub fn from_parents(parents: &[Option<usize>], weights: &[f64]) -> Result<Self> {
        let roots: Vec<usize> = (0..parents.len()).filter(|&v| parents[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::NotATree(format!("{} roots", roots.len())));
        }
        let edges = (0..parents.len())
            .filter_map(|v| parents[v].map(|p| (v, p, weights[v])))
            .collect::<Vec<_>>();
        Self::from_graph(WeightedGraph::new(parents.len(), edges)?, roots[0])
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parent_edge(&self, v: usize) -> Option<usize> {
        self.parent_edge[v]
    }

    /// The endpoint of edge `e` farther from the root.
    pub fn child_of_edge(&self, e: usize) -> usize {
        let Edge { u, v, .. } = self.graph.edge(e);
        if self.parent[u] == Some(v) && self.parent_edge[u] == Some(e) {
            u
        } else {
            v
        }
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn max_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn dist_to_root(&self, v: usize) -> f64 {
        self.dist_root[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Vertices in breadth-first order from the root.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn edge_weight(&self, e: usize) -> f64 {
        self.graph.edge(e).w
    }

    pub fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].unwrap();
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].unwrap();
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
        }
        a
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let c = self.lca(a, b);
        self.dist_root[a] + self.dist_root[b] - 2.0 * self.dist_root[c]
    }

    pub fn path_edges(&self, a: usize, b: usize) -> Vec<usize> {
        let c = self.lca(a, b);
        let mut out = self.edges_up_to(a, c);
        out.extend(self.edges_up_to(b, c));
        out
    }

    pub fn root_path(&self, v: usize) -> Vec<usize> {
        self.edges_up_to(v, self.root)
    }

    fn edges_up_to(&self, mut v: usize, top: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while v != top {
            out.push(self.parent_edge[v].unwrap());
            v = self.parent[v].unwrap();
        }
        out
    }

    /// Edges of the smallest subtree containing every node of `nodes`.
    pub fn minimal_subtree(&self, nodes: &[usize]) -> EdgeSet {
        let mut out = EdgeSet::new();
        let Some(&first) = nodes.first() else { return out };
        let top = nodes.iter().fold(first, |acc, &v| self.lca(acc, v));
        let mut marked = vec![false; self.n()];
        marked[top] = true;
        for &v in nodes {
            let mut cur = v;
            while !marked[cur] {
                marked[cur] = true;
                out.insert(self.parent_edge[cur].unwrap());
                cur = self.parent[cur].unwrap();
            }
        }
        out
    }
}

/// Every child edge weighs at most half its parent edge.
pub fn is_well_separated(t: &RootedTree) -> bool {
    (0..t.n()).all(|v| match (t.parent(v), t.parent_edge(v)) {
        (Some(p), Some(e)) => match t.parent_edge(p) {
            Some(pe) => t.edge_weight(e) <= 0.5 * t.edge_weight(pe) + EPS,
            None => true,
        },
        _ => true,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerPath {
    pub start: usize,
    pub end: usize,
    pub edges: Vec<usize>,
}

/// Splits the doubled tree `2F` into edge-disjoint paths between marked vertices.
pub fn euler_path_partition(g: &WeightedGraph, f: &EdgeSet, marked: &[usize]) -> Result<Vec<EulerPath>> {
    f.validate(g)?;
    if f.is_empty() {
        return Ok(Vec::new());
    }
    let verts = f.vertices(g);
    let mut adj: std::collections::BTreeMap<usize, Vec<(usize, usize)>> = Default::default();
    for e in f.iter() {
        let Edge { u, v, .. } = g.edge(e);
        adj.entry(u).or_default().push((v, e));
        adj.entry(v).or_default().push((u, e));
    }
    if f.len() + 1 != verts.len() || components_of(&adj, &verts) != 1 {
        return Err(Error::NotATree("edge set is not a tree".into()));
    }
    let is_marked: BTreeSet<usize> = marked.iter().copied().collect();
    if let Some(leaf) = verts.iter().find(|v| adj[v].len() == 1 && !is_marked.contains(v)) {
        return invalid(format!("leaf {leaf} of the edge set is not marked"));
    }
    let start = *verts.iter().find(|v| is_marked.contains(v)).expect("a tree has leaves");
    // Depth-first walk traversing every edge once down and once up.
    let mut walk: Vec<(usize, usize)> = Vec::new();
    let mut stack = vec![(start, usize::MAX, 0usize)];
    while let Some(top) = stack.last_mut() {
        let (u, via, idx) = *top;
        let nbrs = &adj[&u];
        if idx < nbrs.len() {
            top.2 += 1;
            let (v, e) = nbrs[idx];
            if e != via {
                walk.push((e, v));
                stack.push((v, e, 0));
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                walk.push((via, p));
            }
        }
    }
    let mut paths = Vec::new();
    let mut cur = EulerPath { start, end: start, edges: Vec::new() };
    for (e, v) in walk {
        cur.edges.push(e);
        if is_marked.contains(&v) {
            cur.end = v;
            let next = EulerPath { start: v, end: v, edges: Vec::new() };
            paths.push(std::mem::replace(&mut cur, next));
        }
    }
    Ok(paths)
}

fn components_of(adj: &std::collections::BTreeMap<usize, Vec<(usize, usize)>>, verts: &BTreeSet<usize>) -> usize {
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for &s in verts {
        if !seen.insert(s) {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[&u] {
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path012() -> WeightedGraph {
        WeightedGraph::new(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap()
    }

    #[test]
    fn path_metric() {
        let m = shortest_path_metric(&path012()).unwrap();
        assert_eq!(m.d(0, 2), 3.0);
        assert_eq!(m.diameter(), 3.0);
        assert_eq!(m.ball(1, 1.0), vec![0, 1]);
        assert_eq!(m.ball(2, 0.0), vec![2]);
    }

    #[test]
    fn single_edge_metric() {
        let g = WeightedGraph::new(2, [(0, 1, 5.0)]).unwrap();
        let m = shortest_path_metric(&g).unwrap();
        assert_eq!((m.d(0, 1), m.diameter()), (5.0, 5.0));
    }

    #[test]
    fn four_cycle() {
        let g = WeightedGraph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap();
        let m = shortest_path_metric(&g).unwrap();
        assert_eq!(m.d(0, 2), 2.0);
        assert_eq!(m.ball(0, 2.0).len(), 4);
        // tie between 0-1-2 and 0-3-2: predecessor of 2 is the smaller id 1
        assert_eq!(m.shortest_path(&g, 0, 2), vec![0, 1]);
    }

    #[test]
    fn disconnected_rejected() {
        let g = WeightedGraph::new(3, [(0, 1, 1.0)]).unwrap();
        let err = shortest_path_metric(&g).unwrap_err();
        assert_eq!(err.to_string(), "graph must be connected");
    }

    #[test]
    fn connectivity_queries() {
        let g = path012();
        assert!(connected(&g, &EdgeSet::new(), &[1], &[1]));
        assert!(!connected(&g, &[0].into_iter().collect(), &[0], &[2]));
        assert!(connected(&g, &[0, 1].into_iter().collect(), &[0], &[2]));
    }

    #[test]
    fn euler_star() {
        let g = WeightedGraph::new(3, [(0, 1, 1.0), (0, 2, 1.0)]).unwrap();
        let f: EdgeSet = [0, 1].into_iter().collect();
        let paths = euler_path_partition(&g, &f, &[1, 2]).unwrap();
        assert_eq!(paths.len(), 2);
        let total: f64 = paths.iter().flat_map(|p| &p.edges).map(|&e| g.edge(e).w).sum();
        assert_eq!(total, 4.0);
        for p in &paths {
            assert_ne!(p.start, p.end);
        }
    }

    #[test]
    fn euler_single_edge_and_path() {
        let g = WeightedGraph::new(2, [(0, 1, 3.0)]).unwrap();
        let paths = euler_path_partition(&g, &[0].into_iter().collect(), &[0, 1]).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(paths.iter().all(|p| p.edges == vec![0]));
        let g = WeightedGraph::new(3, [(0, 1, 2.0), (1, 2, 2.0)]).unwrap();
        let paths = euler_path_partition(&g, &[0, 1].into_iter().collect(), &[0, 2]).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(paths.iter().all(|p| p.edges.len() == 2));
    }

    #[test]
    fn euler_unmarked_leaf() {
        let g = path012();
        assert!(euler_path_partition(&g, &[0, 1].into_iter().collect(), &[0]).is_err());
    }

    #[test]
    fn well_separated_cases() {
        let t = RootedTree::from_parents(&[None, Some(0), Some(1)], &[0.0, 4.0, 2.0]).unwrap();
        assert!(is_well_separated(&t));
        let t = RootedTree::from_parents(&[None, Some(0), Some(1)], &[0.0, 4.0, 3.0]).unwrap();
        assert!(!is_well_separated(&t));
        let t = RootedTree::from_parents(&[None, Some(0)], &[0.0, 4.0]).unwrap();
        assert!(is_well_separated(&t));
    }

    #[test]
    fn tree_paths() {
        let t = RootedTree::from_parents(&[None, Some(0), Some(0), Some(1)], &[0.0, 1.0, 2.0, 4.0]).unwrap();
        assert_eq!(t.distance(3, 2), 7.0);
        assert_eq!(t.minimal_subtree(&[3, 2]).weight(t.graph()), 7.0);
        assert_eq!(t.minimal_subtree(&[3, 1]).len(), 1);
        assert!(t.minimal_subtree(&[2]).is_empty());
    }
}
