//! Demand-robust group Steiner tree on a general graph via the tuple embedding.
use copytree::gen;
use copytree::oracle::{opt_robust, OracleBudget};
use copytree::robust::{solve_robust_general, RobustInstance, RoundingOptions, Scenario};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> copytree::Result<()> {
    let g = gen::connected_graph(&mut ChaCha8Rng::seed_from_u64(4), 8, 3, 6);
    let inst = RobustInstance::new(vec![
        Scenario::groups(2.0, vec![vec![5], vec![6, 7]]),
        Scenario::groups(4.0, vec![vec![3]]),
    ]);
    let run = solve_robust_general(&g, 0, &inst, &RoundingOptions::default())?;
    let opt = opt_robust(&g, 0, &inst, &OracleBudget::default())?;
    println!("first stage {:?}", run.solution.first_stage);
    println!("per scenario {:?}, feasible {:?}", run.evaluation.per_scenario, run.evaluation.feasible);
    println!("tree costs {:?} >= graph costs {:?}", run.tree_costs, run.graph_costs);
    println!("worst case {} vs optimum {}", run.evaluation.worst_case, opt.cost);
    Ok(())
}
