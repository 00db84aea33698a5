//! Builds both copy tree embeddings of a small graph and checks them.
use copytree::embedding::{build_construction1, build_construction2, verify_embedding};
use copytree::gen;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> copytree::Result<()> {
    let g = gen::connected_graph(&mut ChaCha8Rng::seed_from_u64(7), 8, 3, 6);
    let merged = build_construction1(&g, 0, 0.25)?;
    let frt = build_construction2(&g, 0, 24, 7)?;
    for e in [&merged, &frt] {
        let rep = verify_embedding(e, 100, 1);
        println!(
            "{:?}: {} tree nodes, copy number {}, passed {}, forward stretch {:.1}",
            e.construction(),
            e.tree().n(),
            e.copy_number(),
            rep.passed,
            rep.alpha_fwd
        );
    }
    Ok(())
}
