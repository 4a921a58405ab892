//! Flow and packing primitives.

mod arcs;
pub mod branching;
mod decompose;
mod forest;
pub mod maxflow;
mod mincost;
pub mod packing;
mod tree_path;

pub use arcs::ArcVector;
pub use decompose::{decompose_flow_paths, WeightedPathFamily};
pub use forest::{build_downward_monotone_forest, Forest};
pub use maxflow::{capacity_matrix, connectivity, max_flow, min_cut, Cut};
pub use mincost::{round_integral_flow, FlowNetwork};
pub use packing::{pack_arborescences, verify_packing, Tree, WeightedTreeFamily};
pub use tree_path::{tree_to_path, TreeWalk};
