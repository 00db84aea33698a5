//! Partial tree embeddings and the copy tree embeddings built from them.

mod copy_tree;
mod partial;
mod verify;

pub use copy_tree::{
    build_construction1, build_construction1_with, build_construction2, build_demand_robust,
    demand_robust_tree_count, Construction, Construction1Options, CopyTreeEmbedding, DemandRobustEmbedding,
};
pub use partial::{partial_tree_from, project_to_graph, project_to_tree, PartialTreeEmbedding};
pub use verify::{verify_embedding, verify_tuple_map, TupleReport, VerifyReport};
