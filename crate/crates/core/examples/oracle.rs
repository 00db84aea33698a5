//! The exhaustive solvers on their own.
use copytree::graph::{RootedTree, WeightedGraph};
use copytree::oracle::{gst_tree_dp, opt_group_steiner_forest, opt_group_steiner_tree, opt_two_level_partial, OracleBudget};

fn main() -> copytree::Result<()> {
    let b = OracleBudget::default();
    let cycle = WeightedGraph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)])?;
    let gst = opt_group_steiner_tree(&cycle, 0, &[vec![2], vec![1, 3]], &b)?;
    println!("cycle gst {} with edges {:?}", gst.cost, gst.witness);
    let gsf = opt_group_steiner_forest(&cycle, &[(vec![1], vec![3])], &b)?;
    println!("cycle gsf {}", gsf.cost);

    let star = RootedTree::from_parents(&[None, Some(0), Some(0), Some(0)], &[0.0, 1.0, 1.0, 2.0])?;
    let groups = vec![vec![1], vec![2], vec![3]];
    println!("star two of three: {}", opt_two_level_partial(&star, &[(groups.clone(), 2)], &b)?.cost);
    println!("star all three by dp: {}", gst_tree_dp(&star, &groups, &b)?);
    Ok(())
}
