//! Online group Steiner tree / forest through a copy tree embedding, and
//! water filling for the two-level partial variant.

mod drivers;
mod greedy;
mod water_fill;

pub use drivers::{disjoint_groups_gadget, online_gsf_driver, online_gst_driver, DisjointGroups, StepReport};
pub use greedy::{GreedyTreeSolver, TreeGroupForest, TreeGroupSteiner};
pub use water_fill::{partial_gst_general, PartialStep, WaterFillState, WaterFillStep};
