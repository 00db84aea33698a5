//! The pessimistic estimator of the padded weight and the beta scan.

use serde::{Deserialize, Serialize};

use super::level_count;
use crate::error::{invalid, Error, Result};
use crate::graph::{Metric, EPS};

/// Probability weights over the vertices, floored at `1/n^3`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeDistribution {
    p: Vec<f64>,
}

impl NodeDistribution {
    pub fn uniform(n: usize) -> Self {
        Self { p: vec![1.0 / n as f64; n] }
    }

    /// Normalizes `w`, raises every entry to at least `1/n^3`, renormalizes.
    pub fn from_weights(w: &[f64]) -> Result<Self> {
        let n = w.len();
        let total: f64 = w.iter().sum();
        if n == 0 || w.iter().any(|x| !x.is_finite() || *x < 0.0) || total <= 0.0 {
            return invalid("weights must be nonnegative with a positive sum");
        }
        let floor = (n as f64).powi(-3);
        let q: Vec<f64> = w.iter().map(|x| (x / total).max(floor)).collect();
        let s: f64 = q.iter().sum();
        Ok(Self { p: q.into_iter().map(|x| x / s).collect() })
    }

    pub fn p(&self, v: usize) -> f64 {
        self.p[v]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }
}

/// A fixed prefix of the permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixPermutation {
    order: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl PrefixPermutation {
    pub fn empty(n: usize) -> Self {
        Self { order: Vec::new(), pos: vec![None; n] }
    }

    pub fn from_order(n: usize, order: &[usize]) -> Result<Self> {
        let mut p = Self::empty(n);
        for &v in order {
            p.push(v)?;
        }
        Ok(p)
    }

    pub fn push(&mut self, v: usize) -> Result<()> {
        if v >= self.pos.len() || self.pos[v].is_some() {
            return invalid(format!("cannot append {v} to the prefix"));
        }
        self.pos[v] = Some(self.order.len());
        self.order.push(v);
        Ok(())
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.pos[v]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Vertices not yet fixed, ascending.
    pub fn remaining(&self) -> Vec<usize> {
        (0..self.pos.len()).filter(|&v| self.pos[v].is_none()).collect()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 0.125) {
        return Err(Error::Precondition(format!("alpha {alpha} must lie in (0, 1/8]")));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(0.5..1.0).contains(&beta) {
        return invalid(format!("beta {beta} outside [0.5, 1)"));
    }
    Ok(())
}

/// `C_{i,v}`: vertices whose distance to `v` lies in
/// `[2^(i-2) - 2^i alpha, 2^(i-1) + 2^i alpha]`.
pub fn candidate_cutters(m: &Metric, v: usize, i: usize, alpha: f64) -> Result<Vec<usize>> {
    check_alpha(alpha)?;
    Ok(cutters(m, v, i, alpha))
}

fn cutters(m: &Metric, v: usize, i: usize, alpha: f64) -> Vec<usize> {
    let s = (i as f64).exp2();
    let (lo, hi) = (s / 4.0 - s * alpha, s / 2.0 + s * alpha);
    (0..m.n()).filter(|&u| m.d(u, v) >= lo - EPS && m.d(u, v) <= hi + EPS).collect()
}

/// One `(v, i, u)` summand: `u` threatens the level-`i` ball of `v` exactly
/// for `beta` in the open interval `(lo, hi)`.
#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub v: usize,
    pub u: usize,
    pub lo: f64,
    pub hi: f64,
    /// `N_v(u)`: vertices at least as close to `v` as `u`.
    pub nearer: Vec<usize>,
}

impl Term {
    pub fn threatens(&self, beta: f64) -> bool {
        self.lo < beta && beta < self.hi
    }

    /// Probability that `u` comes first among `nearer` given the prefix.
    pub fn precedence(&self, prefix: &PrefixPermutation) -> f64 {
        let first = self.nearer.iter().filter_map(|&w| prefix.position(w).map(|p| (p, w))).min();
        match first {
            None => 1.0 / self.nearer.len() as f64,
            Some((_, w)) if w == self.u => 1.0,
            Some(_) => 0.0,
        }
    }
}

pub(crate) fn terms(m: &Metric, alpha: f64) -> Vec<Term> {
    let h = level_count(m.diameter());
    let mut out = Vec::new();
    for v in 0..m.n() {
        for i in 1..=h {
            let scale = (1.0 - i as f64).exp2();
            for u in cutters(m, v, i, alpha) {
                let d = m.d(u, v);
                let nearer = (0..m.n()).filter(|&w| m.d(w, v) <= d + EPS).collect();
                out.push(Term { v, u, lo: d * scale - 2.0 * alpha, hi: d * scale + 2.0 * alpha, nearer });
            }
        }
    }
    out
}

/// `f^(pi_P, beta) = 1 - sum_v p_v sum_i sum_{u in C_{i,v}} Pr[u first in N_v(u)] [u threatens]`.
pub fn pessimistic_estimate(
    m: &Metric,
    p: &NodeDistribution,
    prefix: &PrefixPermutation,
    beta: f64,
    alpha: f64,
) -> Result<f64> {
    check_alpha(alpha)?;
    check_beta(beta)?;
    let loss: f64 = terms(m, alpha)
        .iter()
        .filter(|t| t.threatens(beta))
        .map(|t| p.p(t.v) * t.precedence(prefix))
        .sum();
    Ok(1.0 - loss)
}

/// Sorted distinct points of `R_l` and `R_u` strictly inside `(1/2, 1)`.
fn threshold_points(m: &Metric, alpha: f64) -> Vec<f64> {
    let h = level_count(m.diameter());
    let mut pts = Vec::new();
    for u in 0..m.n() {
        for v in 0..m.n() {
            if u == v {
                continue;
            }
            for i in 1..=h {
                let c = m.d(u, v) * (1.0 - i as f64).exp2();
                for x in [c + 2.0 * alpha, c - 2.0 * alpha] {
                    if x > 0.5 + 1e-12 && x < 1.0 - 1e-12 {
                        pts.push(x);
                    }
                }
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    pts
}

/// The interval endpoints themselves, sorted.
pub fn beta_threshold_points(m: &Metric, alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    Ok(threshold_points(m, alpha))
}

/// One representative (the midpoint) of every open interval of `[1/2, 1)`
/// cut out by the threshold points.
pub fn beta_thresholds(m: &Metric, alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    Ok(representatives(m, alpha))
}

fn representatives(m: &Metric, alpha: f64) -> Vec<f64> {
    let mut ends = vec![0.5];
    ends.extend(threshold_points(m, alpha));
    ends.push(1.0);
    ends.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

/// Per-vertex loss `sum_{terms of v threatening beta} weight(term)` at every
/// representative; `weight` sees the term.
fn loss_table(n: usize, terms: &[Term], reps: &[f64], weight: impl Fn(&Term) -> f64) -> Vec<Vec<f64>> {
    let mut diff = vec![vec![0.0; reps.len() + 1]; n];
    for t in terms {
        let a = reps.partition_point(|&b| b <= t.lo);
        let b = reps.partition_point(|&b| b < t.hi);
        if a < b {
            let w = weight(t);
            diff[t.v][a] += w;
            diff[t.v][b] -= w;
        }
    }
    diff.into_iter()
        .map(|d| {
            let mut acc = 0.0;
            d[..reps.len()].iter().map(|x| {
                acc += x;
                acc
            })
            .collect()
        })
        .collect()
}

/// `(best beta, f^(empty prefix, best beta))` over the representatives; ties
/// keep the smallest beta.
pub(crate) fn best_beta(m: &Metric, p: &NodeDistribution, alpha: f64, terms: &[Term]) -> (f64, f64) {
    let reps = representatives(m, alpha);
    let table = loss_table(m.n(), terms, &reps, |t| 1.0 / t.nearer.len() as f64);
    let mut best = (reps[0], f64::NEG_INFINITY);
    for (k, &beta) in reps.iter().enumerate() {
        let value = 1.0 - (0..m.n()).map(|v| p.p(v) * table[v][k]).sum::<f64>();
        if value > best.1 + 1e-12 {
            best = (beta, value);
        }
    }
    best
}

const GOOD_START: f64 = 0.95;
const MIN_ALPHA_EXP: i32 = 60;

/// Largest `alpha = 2^-k`, `k >= 3`, whose best empty-prefix estimate under
/// `p` reaches 0.95.
pub fn calibrate_alpha(m: &Metric, p: &NodeDistribution) -> f64 {
    for k in 3..=MIN_ALPHA_EXP {
        let alpha = (-(k as f64)).exp2();
        if best_beta(m, p, alpha, &terms(m, alpha)).1 >= GOOD_START - 1e-12 {
            return alpha;
        }
    }
    (-(MIN_ALPHA_EXP as f64)).exp2()
}

/// Like [`calibrate_alpha`] but the good start must hold for every
/// distribution at once: some beta keeps each single vertex's loss below 0.05.
pub fn calibrate_alpha_uniform(m: &Metric) -> f64 {
    for k in 3..=MIN_ALPHA_EXP {
        let alpha = (-(k as f64)).exp2();
        let reps = representatives(m, alpha);
        let table = loss_table(m.n(), &terms(m, alpha), &reps, |t| 1.0 / t.nearer.len() as f64);
        let ok = (0..reps.len()).any(|j| (0..m.n()).all(|v| table[v][j] <= 1.0 - GOOD_START + 1e-12));
        if ok {
            return alpha;
        }
    }
    (-(MIN_ALPHA_EXP as f64)).exp2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{shortest_path_metric, WeightedGraph};

    fn two() -> Metric {
        shortest_path_metric(&WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap()).unwrap()
    }

    #[test]
    fn cutter_windows() {
        let m = two();
        // window [0.375, 1.125]
        assert_eq!(candidate_cutters(&m, 0, 1, 1.0 / 16.0).unwrap(), vec![1]);
        // window [0.75, 2.25]
        assert_eq!(candidate_cutters(&m, 0, 2, 1.0 / 16.0).unwrap(), vec![1]);
        assert!(candidate_cutters(&m, 0, 2, 0.25).is_err());
    }

    #[test]
    fn hand_estimates() {
        let m = two();
        let p = NodeDistribution::uniform(2);
        let empty = PrefixPermutation::empty(2);
        let f = pessimistic_estimate(&m, &p, &empty, 0.9, 0.125).unwrap();
        assert!((f - 0.5).abs() < 1e-12);
        let f = pessimistic_estimate(&m, &p, &empty, 0.75, 1.0 / 16.0).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
        let ab = PrefixPermutation::from_order(2, &[0, 1]).unwrap();
        let f = pessimistic_estimate(&m, &p, &ab, 0.9, 0.125).unwrap();
        assert!((f - 0.5).abs() < 1e-12);
    }

    #[test]
    fn thresholds_two_vertices() {
        let m = two();
        assert_eq!(threshold_points(&m, 0.125), vec![0.75]);
        assert_eq!(beta_thresholds(&m, 0.125).unwrap(), vec![0.625, 0.875]);
        let one = shortest_path_metric(&WeightedGraph::new(1, []).unwrap()).unwrap();
        assert_eq!(beta_thresholds(&one, 0.125).unwrap().len(), 1);
    }

    #[test]
    fn calibration() {
        let m = two();
        assert_eq!(calibrate_alpha(&m, &NodeDistribution::uniform(2)), 1.0 / 16.0);
        assert_eq!(calibrate_alpha_uniform(&m), 1.0 / 16.0);
        let one = shortest_path_metric(&WeightedGraph::new(1, []).unwrap()).unwrap();
        assert_eq!(calibrate_alpha(&one, &NodeDistribution::uniform(1)), 0.125);
    }

    #[test]
    fn floor_applies() {
        let p = NodeDistribution::from_weights(&[1.0, 0.0, 0.0]).unwrap();
        assert!(p.p(1) > 0.0);
        assert!((p.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
