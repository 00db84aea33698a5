//! Conditional-expectation permutation fixing and the multiplicative-weights
//! loop over decompositions.

use serde::Serialize;

use super::estimator::{best_beta, terms, NodeDistribution, PrefixPermutation};
use super::{decomposition_from, is_alpha_padded, CuttingDraw, HierarchicalDecomposition};
use crate::error::{Error, Result};
use crate::graph::Metric;

#[derive(Clone, Debug, PartialEq)]
pub struct DerandomizedDecomposition {
    pub decomposition: HierarchicalDecomposition,
    pub draw: CuttingDraw,
    /// Estimate after fixing 0, 1, ..., n vertices.
    pub trace: Vec<f64>,
    /// `sum_v p_v [v padded]` for the distribution used.
    pub padded_weight: f64,
}

/// Picks the best beta, then fixes the permutation greedily so the estimate
/// never drops. Fails when the starting estimate is below 0.95.
pub fn derandomized_decomposition(
    m: &Metric,
    p: &NodeDistribution,
    alpha: f64,
) -> Result<DerandomizedDecomposition> {
    if !(alpha > 0.0 && alpha <= 0.125) {
        return Err(Error::Precondition(format!("alpha {alpha} must lie in (0, 1/8]")));
    }
    if p.n() != m.n() {
        return Err(Error::InvalidInput("distribution size differs from vertex count".into()));
    }
    let n = m.n();
    let all = terms(m, alpha);
    let (beta, start) = best_beta(m, p, alpha, &all);
    if start < 0.95 - 1e-12 {
        return Err(Error::GoodStart { best: start });
    }
    let active: Vec<_> = all.into_iter().filter(|t| t.threatens(beta)).collect();
    let mut containing = vec![Vec::new(); n];
    for (k, t) in active.iter().enumerate() {
        for &w in &t.nearer {
            containing[w].push(k);
        }
    }
    // A term is decided once any member of its `nearer` set is fixed; until
    // then it contributes `p_v / |N|`.
    let mut decided = vec![false; active.len()];
    let mut prefix = PrefixPermutation::empty(n);
    let mut value = start;
    let mut trace = vec![value];
    for _ in 0..n {
        let mut best: Option<(usize, f64)> = None;
        for c in prefix.remaining() {
            let delta: f64 = containing[c]
                .iter()
                .filter(|&&k| !decided[k])
                .map(|&k| {
                    let t = &active[k];
                    let now = 1.0 / t.nearer.len() as f64;
                    let then = if t.u == c { 1.0 } else { 0.0 };
                    p.p(t.v) * (then - now)
                })
                .sum();
            let candidate = value - delta;
            if best.is_none_or(|(_, b)| candidate > b + 1e-12) {
                best = Some((c, candidate));
            }
        }
        let (c, next) = best.expect("remaining vertices exist");
        for &k in &containing[c] {
            decided[k] = true;
        }
        prefix.push(c)?;
        value = next;
        trace.push(value);
    }
    let draw = CuttingDraw { pi: prefix.order().to_vec(), beta };
    let decomposition = decomposition_from(m, &draw)?;
    let padded_weight = (0..n).filter(|&v| is_alpha_padded(m, &decomposition, v, alpha)).map(|v| p.p(v)).sum();
    Ok(DerandomizedDecomposition { decomposition, draw, trace, padded_weight })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PaddedFamily {
    pub alpha: f64,
    pub epsilon: f64,
    pub tau: usize,
    pub decompositions: Vec<HierarchicalDecomposition>,
    pub draws: Vec<CuttingDraw>,
    /// `padded[t][v]`.
    pub padded: Vec<Vec<bool>>,
    /// Distribution used in round `t`.
    pub distributions: Vec<Vec<f64>>,
    /// Weighted padded fraction of round `t` under its own distribution.
    pub padded_weight: Vec<f64>,
}

#[derive(Serialize)]
struct FamilyDump<'a> {
    alpha: f64,
    epsilon: f64,
    tau: usize,
    padded_counts: Vec<usize>,
    decompositions: Vec<serde_json::Value>,
    draws: &'a [CuttingDraw],
}

impl PaddedFamily {
    pub fn padded_count(&self, v: usize) -> usize {
        self.padded.iter().filter(|row| row[v]).count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.padded.first().map_or(0, Vec::len);
        serde_json::to_value(FamilyDump {
            alpha: self.alpha,
            epsilon: self.epsilon,
            tau: self.tau,
            padded_counts: (0..n).map(|v| self.padded_count(v)).collect(),
            decompositions: self.decompositions.iter().map(|d| d.to_json()).collect(),
            draws: &self.draws,
        })
        .expect("plain data")
    }
}

/// Default round count `max(1, ceil(4 ln n / eps^2))`.
pub fn default_tau(n: usize, epsilon: f64) -> usize {
    ((4.0 * (n as f64).ln() / (epsilon * epsilon)).ceil() as usize).max(1)
}

/// Multiplicative weights: a vertex padded in round `t` loses weight by
/// `exp(-eps)`, steering later rounds towards the vertices still short.
pub fn padded_family(m: &Metric, epsilon: f64, alpha: f64, tau_override: Option<usize>) -> Result<PaddedFamily> {
    if !(epsilon > 0.0 && epsilon <= 0.25) {
        return Err(Error::Precondition(format!("epsilon {epsilon} must lie in (0, 0.25]")));
    }
    let n = m.n();
    let tau = tau_override.unwrap_or_else(|| default_tau(n, epsilon));
    let mut w = vec![1.0; n];
    let mut family = PaddedFamily {
        alpha,
        epsilon,
        tau,
        decompositions: Vec::with_capacity(tau),
        draws: Vec::with_capacity(tau),
        padded: Vec::with_capacity(tau),
        distributions: Vec::with_capacity(tau),
        padded_weight: Vec::with_capacity(tau),
    };
    for _ in 0..tau {
        let p = NodeDistribution::from_weights(&w)?;
        let round = derandomized_decomposition(m, &p, alpha)?;
        let padded: Vec<bool> = (0..n).map(|v| is_alpha_padded(m, &round.decomposition, v, alpha)).collect();
        for v in 0..n {
            if padded[v] {
                w[v] *= (-epsilon).exp();
            }
        }
        let top = w.iter().copied().fold(0.0, f64::max);
        w.iter_mut().for_each(|x| *x /= top);
        family.decompositions.push(round.decomposition);
        family.draws.push(round.draw);
        family.padded.push(padded);
        family.distributions.push(p.as_slice().to_vec());
        family.padded_weight.push(round.padded_weight);
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{shortest_path_metric, WeightedGraph};

    #[test]
    fn two_vertices_fully_padded() {
        let m = shortest_path_metric(&WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap()).unwrap();
        let out = derandomized_decomposition(&m, &NodeDistribution::uniform(2), 1.0 / 16.0).unwrap();
        assert_eq!(out.padded_weight, 1.0);
        assert_eq!(out.draw.beta, 0.75);
        assert!(matches!(
            derandomized_decomposition(&m, &NodeDistribution::uniform(2), 0.125),
            Err(Error::GoodStart { .. })
        ));
    }

    #[test]
    fn family_two_vertices() {
        let m = shortest_path_metric(&WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap()).unwrap();
        let fam = padded_family(&m, 0.25, 1.0 / 16.0, None).unwrap();
        assert_eq!(fam.tau, 45);
        assert!(fam.padded_count(0) >= 32 && fam.padded_count(1) >= 32);
        assert!(padded_family(&m, 0.3, 1.0 / 16.0, None).is_err());
    }

    #[test]
    fn family_single_vertex() {
        let m = shortest_path_metric(&WeightedGraph::new(1, []).unwrap()).unwrap();
        let fam = padded_family(&m, 0.25, 0.125, None).unwrap();
        assert!(fam.tau >= 1);
        assert_eq!(fam.padded_count(0), fam.tau);
    }
}
