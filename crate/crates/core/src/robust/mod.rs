//! Demand-robust group Steiner tree and forest: LP relaxations on trees,
//! online dependent rounding, and the general-graph pipeline through a
//! demand-robust copy tree embedding.

mod instance;
mod lp;
mod lp_gsf;
mod lp_gst;
mod rounding;
mod solve;

pub use instance::{
    evaluate_robust, map_robust_instance, Demands, ProblemKind, RobustEvaluation, RobustInstance, RobustSolution,
    Scenario,
};
pub use lp::{solve_lp, Cmp, Constraint, LinearProgram, LpSolution};
pub use lp_gsf::{build_lp_gsf, ForestEdge, GsfLp, LayeredForest};
pub use lp_gst::{build_lp_gst, FractionalSolution, GstLp};
pub use rounding::{EdgeForest, RoundingState};
pub use solve::{
    default_copies, round_robust_gsf, round_robust_gst, solve_robust_general, solve_robust_tree, GeneralRun,
    RobustRounding, RoundingOptions, TreeRun,
};
