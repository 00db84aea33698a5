use crate::error::{Error, Result};
use crate::graph::{EdgeSet, RootedTree};

/// An online group Steiner tree algorithm on a rooted tree.
pub trait TreeGroupSteiner {
    /// Extends the solution so some node of `group` reaches the root.
    fn connect_group(&mut self, group: &[usize]) -> Result<&EdgeSet>;
}

/// An online group Steiner forest algorithm on a tree.
pub trait TreeGroupForest {
    /// Extends the solution so some node of `a` reaches some node of `b`.
    fn connect_pair(&mut self, a: &[usize], b: &[usize]) -> Result<&EdgeSet>;
}

/// Buys the cheapest connecting tree path, counting bought edges as free.
#[derive(Clone, Debug)]
pub struct GreedyTreeSolver<'a> {
    tree: &'a RootedTree,
    bought: EdgeSet,
}

impl<'a> GreedyTreeSolver<'a> {
    pub fn new(tree: &'a RootedTree) -> Self {
        Self { tree, bought: EdgeSet::new() }
    }

    pub fn solution(&self) -> &EdgeSet {
        &self.bought
    }

    fn price(&self, path: &[usize]) -> f64 {
        path.iter().filter(|&&e| !self.bought.contains(e)).map(|&e| self.tree.edge_weight(e)).sum()
    }

    fn check(&self, nodes: &[usize]) -> Result<()> {
        if nodes.is_empty() {
            return Err(Error::InvalidInput("empty demand set".into()));
        }
        if let Some(&x) = nodes.iter().find(|&&x| x >= self.tree.n()) {
            return Err(Error::InvalidInput(format!("node {x} not in the tree")));
        }
        Ok(())
    }

    fn buy_cheapest(&mut self, candidates: impl Iterator<Item = Vec<usize>>) {
        let mut best: Option<(f64, Vec<usize>)> = None;
        for path in candidates {
            let c = self.price(&path);
            if best.as_ref().is_none_or(|(b, _)| c < *b) {
                best = Some((c, path));
            }
        }
        if let Some((_, path)) = best {
            self.bought.extend(path);
        }
    }
}

impl TreeGroupSteiner for GreedyTreeSolver<'_> {
    fn connect_group(&mut self, group: &[usize]) -> Result<&EdgeSet> {
        self.check(group)?;
        let mut sorted = group.to_vec();
        sorted.sort_unstable();
        let t = self.tree;
        self.buy_cheapest(sorted.into_iter().map(|x| t.root_path(x)));
        Ok(&self.bought)
    }
}

impl TreeGroupForest for GreedyTreeSolver<'_> {
    fn connect_pair(&mut self, a: &[usize], b: &[usize]) -> Result<&EdgeSet> {
        self.check(a)?;
        self.check(b)?;
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        a.sort_unstable();
        b.sort_unstable();
        let t = self.tree;
        self.buy_cheapest(a.iter().flat_map(|&x| b.iter().map(move |&y| t.path_edges(x, y))));
        Ok(&self.bought)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_buys_cheaper_leaf() {
        let t = RootedTree::from_parents(&[None, Some(0), Some(0)], &[0.0, 1.0, 3.0]).unwrap();
        let mut s = GreedyTreeSolver::new(&t);
        let sol = s.connect_group(&[1, 2]).unwrap().clone();
        assert_eq!(sol.weight(t.graph()), 1.0);
        // already connected: nothing new
        assert_eq!(s.connect_group(&[1]).unwrap(), &sol);
    }

    #[test]
    fn pair_path() {
        let t = RootedTree::from_parents(&[None, Some(0), Some(1)], &[0.0, 1.0, 1.0]).unwrap();
        let mut s = GreedyTreeSolver::new(&t);
        assert_eq!(s.connect_pair(&[1], &[2]).unwrap().len(), 1);
        assert_eq!(s.connect_pair(&[0], &[0]).unwrap().len(), 1);
    }
}
