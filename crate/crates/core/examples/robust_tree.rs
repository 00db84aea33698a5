//! Demand-robust group Steiner tree and forest on a tree: LP, rounding, oracle.
use copytree::gen;
use copytree::oracle::{opt_robust, OracleBudget};
use copytree::robust::{build_lp_gsf, build_lp_gst, solve_robust_tree, RobustInstance, RoundingOptions, Scenario};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> copytree::Result<()> {
    let tree = gen::tree(&mut ChaCha8Rng::seed_from_u64(2), 9, 3, 6);
    let groups = RobustInstance::new(vec![
        Scenario::groups(3.0, vec![vec![4, 5], vec![8]]),
        Scenario::groups(1.5, vec![vec![2]]),
    ]);
    let pairs = RobustInstance::new(vec![Scenario::pairs(2.0, vec![(vec![3], vec![7])])]);
    for inst in [&groups, &pairs] {
        let z = match inst.kind() {
            Some(copytree::robust::ProblemKind::Forest) => build_lp_gsf(&tree, inst)?.solve()?.objective,
            _ => build_lp_gst(&tree, inst)?.solve()?.objective,
        };
        let run = solve_robust_tree(&tree, inst, &RoundingOptions::default())?;
        let opt = opt_robust(tree.graph(), 0, inst, &OracleBudget::default())?;
        println!(
            "{:?}: lp {z:.3}, rounded worst case {} after {} attempt(s), optimum {}",
            run.kind, run.evaluation.worst_case, run.attempts, opt.cost
        );
    }
    Ok(())
}
