//! Water filling on a tree, then the general-graph partial wrapper.
use copytree::embedding::build_construction1;
use copytree::gen;
use copytree::graph::RootedTree;
use copytree::online::{partial_gst_general, WaterFillState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> copytree::Result<()> {
    let star = RootedTree::from_parents(&[None, Some(0), Some(0), Some(0)], &[0.0, 1.0, 1.0, 2.0])?;
    let mut s = WaterFillState::new(&star);
    let step = s.reveal(&star, &[vec![1], vec![2], vec![3]], 2, 0.01)?;
    println!("star: {} groups reached, cost {}, levels {:?}", step.touched, step.cost, s.x());

    let mut r = ChaCha8Rng::seed_from_u64(9);
    let g = gen::connected_graph(&mut r, 8, 3, 6);
    let e = build_construction1(&g, 0, 0.25)?;
    let pool: Vec<usize> = (1..g.n()).collect();
    let stream: Vec<(Vec<usize>, usize)> =
        gen::groups(&mut r, &pool, 3, 4).into_iter().map(|gr| (gr.clone(), gr.len().div_ceil(2))).collect();
    for st in partial_gst_general(&e, &stream, 0.5)? {
        println!("step {}: {} connected (target {}), cost {}", st.step, st.connected, st.target, st.cost);
    }
    Ok(())
}
