//! Online group Steiner tree and forest through a copy tree embedding.
use copytree::embedding::build_construction1;
use copytree::gen;
use copytree::online::{online_gsf_driver, online_gst_driver, GreedyTreeSolver};
use copytree::oracle::{opt_group_steiner_forest, opt_group_steiner_tree, OracleBudget};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> copytree::Result<()> {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let g = gen::connected_graph(&mut r, 9, 4, 8);
    let e = build_construction1(&g, 0, 0.25)?;
    let pool: Vec<usize> = (1..g.n()).collect();

    let groups = gen::groups(&mut r, &pool, 4, 2);
    let steps = online_gst_driver(&e, &mut GreedyTreeSolver::new(e.tree()), &groups)?;
    for (s, gr) in steps.iter().zip(&groups) {
        println!("group {gr:?}: cost {} (tree {})", s.cost, s.tree_cost);
    }
    let opt = opt_group_steiner_tree(&g, 0, &groups, &OracleBudget::default())?;
    println!("offline optimum {}", opt.cost);

    let pairs: Vec<_> = (0..3).map(|_| (vec![pool[0]], gen::groups(&mut r, &pool, 1, 2).remove(0))).collect();
    let steps = online_gsf_driver(&e, &mut GreedyTreeSolver::new(e.tree()), &pairs)?;
    let opt = opt_group_steiner_forest(&g, &pairs, &OracleBudget::default())?;
    println!("forest: online {} vs optimum {}", steps.last().unwrap().cost, opt.cost);
    Ok(())
}
