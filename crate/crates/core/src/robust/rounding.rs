use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lp_gsf::LayeredForest;
use crate::error::{invalid, Result};
use crate::graph::{EdgeSet, RootedTree};

const TOL: f64 = 1e-9;

/// Edges `0..len` arranged as a forest: each edge knows the edge above it.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeForest {
    parent: Vec<Option<usize>>,
    /// Parents before children.
    order: Vec<usize>,
}

impl EdgeForest {
    pub fn new(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        let mut depth = vec![usize::MAX; n];
        for start in 0..n {
            let mut chain = Vec::new();
            let mut cur = start;
            while depth[cur] == usize::MAX {
                if chain.len() > n {
                    return invalid("edge forest has a cycle");
                }
                chain.push(cur);
                match parent[cur] {
                    Some(p) if p >= n => return invalid(format!("parent edge {p} out of range")),
                    Some(p) => cur = p,
                    None => break,
                }
            }
            let mut d = if depth[cur] == usize::MAX { 0 } else { depth[cur] + 1 };
            for &e in chain.iter().rev() {
                if depth[e] == usize::MAX {
                    depth[e] = d;
                    d += 1;
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&e| (depth[e], e));
        Ok(Self { parent, order })
    }

    pub fn from_tree(t: &RootedTree) -> Self {
        let mut parent = vec![None; t.graph().m()];
        for v in 0..t.n() {
            if let (Some(e), Some(p)) = (t.parent_edge(v), t.parent(v)) {
                parent[e] = t.parent_edge(p);
            }
        }
        Self::new(parent).expect("a rooted tree gives an edge forest")
    }

    pub fn from_layered(lf: &LayeredForest) -> Self {
        Self::new(lf.edges.iter().map(|f| f.parent).collect()).expect("layers are forests")
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, e: usize) -> Option<usize> {
        self.parent[e]
    }

    /// Caps at 1 and lowers any edge above its parent, top-down.
    pub fn repair(&self, y: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = y.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        for &e in &self.order {
            if let Some(p) = self.parent[e] {
                out[e] = out[e].min(out[p]);
            }
        }
        out
    }
}

/// One copy of the online dependent rounding. Feeding a larger vector
/// `y'` adds edge `e` (whose parent edge is now in `F`) with probability
/// `(y'_e - y_e) / (y'_p - y_e)`, so `Pr[e in F] = y'_e` after every feed
/// and `F` only grows.
#[derive(Clone, Debug)]
pub struct RoundingState {
    forest: EdgeForest,
    y: Vec<f64>,
    chosen: Vec<bool>,
    rng: ChaCha8Rng,
}

impl RoundingState {
    pub fn new(forest: EdgeForest, seed: u64) -> Self {
        let n = forest.len();
        Self { forest, y: vec![0.0; n], chosen: vec![false; n], rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn selected(&self) -> EdgeSet {
        (0..self.chosen.len()).filter(|&e| self.chosen[e]).collect()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.chosen[e]
    }

    fn check(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.y.len() {
            return invalid(format!("vector of length {} for {} edges", y.len(), self.y.len()));
        }
        for (e, &v) in y.iter().enumerate() {
            if !(-TOL..=1.0 + TOL).contains(&v) {
                return invalid(format!("y[{e}] = {v} outside [0, 1]"));
            }
            if v < self.y[e] - TOL {
                return invalid(format!("y[{e}] decreased from {} to {v}", self.y[e]));
            }
            if let Some(p) = self.forest.parent[e] {
                if v > y[p] + TOL {
                    return invalid(format!("y[{e}] = {v} exceeds its parent's {}", y[p]));
                }
            }
        }
        Ok(())
    }

    pub fn feed(&mut self, y: &[f64]) -> Result<EdgeSet> {
        self.check(y)?;
        let mut next = vec![0.0; y.len()];
        for &e in &self.forest.order {
            let cap = self.forest.parent[e].map_or(1.0, |p| next[p]);
            next[e] = y[e].clamp(self.y[e], cap);
        }
        for &e in &self.forest.order {
            let u: f64 = self.rng.random();
            if self.chosen[e] || !self.forest.parent[e].is_none_or(|p| self.chosen[p]) {
                continue;
            }
            let top = self.forest.parent[e].map_or(1.0, |p| next[p]);
            let denom = top - self.y[e];
            let num = next[e] - self.y[e];
            if denom > 1e-15 && u < num / denom {
                self.chosen[e] = true;
            }
        }
        self.y = next;
        Ok(self.selected())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> EdgeForest {
        EdgeForest::new(vec![None, Some(0)]).unwrap()
    }

    #[test]
    fn zero_and_one() {
        let mut s = RoundingState::new(path(), 1);
        assert!(s.feed(&[0.0, 0.0]).unwrap().is_empty());
        assert_eq!(s.feed(&[1.0, 1.0]).unwrap().len(), 2);
    }

    #[test]
    fn rejects_bad_vectors() {
        let mut s = RoundingState::new(path(), 1);
        assert!(s.feed(&[0.2, 0.5]).is_err());
        s.feed(&[0.5, 0.5]).unwrap();
        assert!(s.feed(&[0.4, 0.4]).is_err());
    }

    #[test]
    fn path_marginal() {
        let trials = 100_000;
        let mut hits = 0;
        for t in 0..trials {
            let mut s = RoundingState::new(path(), t);
            s.feed(&[0.5, 0.25]).unwrap();
            hits += s.contains(1) as usize;
        }
        let p = hits as f64 / trials as f64;
        let sd = (0.25f64 * 0.75 / trials as f64).sqrt();
        assert!((p - 0.25).abs() <= 3.0 * sd, "{p}");
    }

    #[test]
    fn repair_lowers_children() {
        assert_eq!(path().repair(&[0.4, 1.3]), vec![0.4, 0.4]);
    }
}
