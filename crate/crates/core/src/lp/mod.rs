//! Linear programming layer: models, float solving, exact checking.

mod check;
mod dump;
pub mod exact;
mod model;
mod solve;

pub use check::{check_feasibility, FeasibilityReport};
pub use dump::write_lp_format;
pub use exact::{solve_exact, ExactOutcome};
pub use model::{Cmp, LpModel, Row, Sense, Var, VarDef};
pub use solve::{max_violation, solve_lp, LpSolution, LpStatus};
