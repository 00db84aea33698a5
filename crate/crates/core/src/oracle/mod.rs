//! Exhaustive ground truth for small instances.

mod lp_check;
mod padding;
mod robust;
mod steiner;

pub use lp_check::lp_vertex_enumeration;
pub use padding::{monte_carlo_padding, MonteCarloEstimate};
pub use robust::{opt_robust, RobustOracle};
pub use steiner::{
    gst_tree_dp, opt_group_steiner_forest, opt_group_steiner_tree, opt_two_level_partial, OracleBudget, OracleResult,
};
