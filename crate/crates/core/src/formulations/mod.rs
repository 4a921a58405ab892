//! Linear relaxations and the extraction of their solutions.

mod common;
pub mod p2p;
pub mod preflow;
pub mod sentinel;
pub mod tsp;

pub use common::DROP_TOL;
pub use p2p::{build_p2p, extract_p2p_family, P2pBlock, P2pFlowFamily, P2pModel};
pub use preflow::{
    build_regret_orienteering, build_rooted_orienteering, build_rvrp_r1, build_weak_ro_variant,
    extract_preflow_family, solve_blockwise, PreflowBlock, PreflowFamily, PreflowMode, PreflowModel, SingleFlowModel, WeakModel,
    WeakVariant,
};
pub use sentinel::{build_rvrp_r2, extract_sentinel_structure, Interval, RvrpR2Model, Sentinel, SentinelStructure};
pub use tsp::{build_regret_tsp_path, extract_tsp_flow, TspMode, TspModel, TspPathFlow};
