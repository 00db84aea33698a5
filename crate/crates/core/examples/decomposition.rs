//! Estimator values, one derandomized decomposition and a padded family.
use copytree::decomposition::{
    beta_thresholds, calibrate_alpha, derandomized_decomposition, padded_family, pessimistic_estimate,
    NodeDistribution, PrefixPermutation,
};
use copytree::gen;
use copytree::graph::shortest_path_metric;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> copytree::Result<()> {
    let g = gen::connected_graph(&mut ChaCha8Rng::seed_from_u64(3), 7, 2, 5);
    let m = shortest_path_metric(&g)?;
    let p = NodeDistribution::uniform(m.n());
    let alpha = calibrate_alpha(&m, &p);
    let reps = beta_thresholds(&m, alpha)?;
    let empty = PrefixPermutation::empty(m.n());
    let best = reps
        .iter()
        .map(|&b| (b, pessimistic_estimate(&m, &p, &empty, b, alpha).unwrap()))
        .fold((0.5, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
    println!("alpha {alpha}, {} beta intervals, best beta {:.4} with estimate {:.4}", reps.len(), best.0, best.1);

    let d = derandomized_decomposition(&m, &p, alpha)?;
    println!("fixed order {:?}, trace {:?}", d.draw.pi, d.trace);
    println!("padded weight {:.3}, levels {}", d.padded_weight, d.decomposition.h());

    let fam = padded_family(&m, 0.25, alpha, None)?;
    let counts: Vec<usize> = (0..m.n()).map(|v| fam.padded_count(v)).collect();
    println!("family of {}: padded counts {counts:?}", fam.tau);
    Ok(())
}
