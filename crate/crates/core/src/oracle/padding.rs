use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decomposition::{decomposition_from, is_alpha_padded, CuttingDraw, NodeDistribution, PrefixPermutation};
use crate::error::Result;
use crate::graph::Metric;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Expected `p`-weight of padded vertices when the rest of the permutation
/// after `prefix` is uniformly random and `beta` is fixed.
pub fn monte_carlo_padding(
    m: &Metric,
    p: &NodeDistribution,
    prefix: &PrefixPermutation,
    beta: f64,
    alpha: f64,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..samples {
        let mut rest = prefix.remaining();
        rest.shuffle(&mut rng);
        let mut pi = prefix.order().to_vec();
        pi.extend(rest);
        let hd = decomposition_from(m, &CuttingDraw { pi, beta })?;
        let x: f64 = (0..m.n()).filter(|&v| is_alpha_padded(m, &hd, v, alpha)).map(|v| p.p(v)).sum();
        sum += x;
        sq += x * x;
    }
    let k = samples.max(1) as f64;
    let mean = sum / k;
    let var = (sq / k - mean * mean).max(0.0);
    Ok(MonteCarloEstimate { mean, stderr: (var / k).sqrt(), samples })
}
