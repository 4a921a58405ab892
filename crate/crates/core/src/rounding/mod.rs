//! Rounding of extracted LP solutions into paths.

mod orienteering;
mod redblue;
mod rvrp;
mod sentinel;
mod split;
mod tsp;

pub use orienteering::{
    round_p2p, round_regret_orienteering, round_rooted_orienteering, solve_p2p, solve_p2p_by_reduction,
    solve_regret_orienteering, solve_rooted_orienteering, BlockAccount,
    LpRegretSolver, OrienteeringRounding, RegretSolver,
};
pub use redblue::{classify_red_blue, RedBlueDecomposition, RedGroup};
pub use rvrp::{lift_paths, round_rvrp_r1, round_rvrp_r2, solve_rvrp, RvrpRelaxation, RvrpRounding};
pub use sentinel::{count_bound, paths_to_sentinel_structure, round_sentinel_structure, PipelineTrace};
pub use split::{split_by_regret, split_path};
pub use tsp::{round_regret_tsp_path, solve_regret_tsp_path, TspRounding};
