//! LP relaxations and rounding algorithms for orienteering, regret-bounded
//! vehicle routing and minimum-regret TSP paths, with exact oracles.

pub mod error;
pub mod formulations;
pub mod graph;
pub mod lp;
pub mod model;
pub mod num;
pub mod oracles;
pub mod rounding;

pub use error::{Error, Result};
pub use model::{Instance, Node, Problem, RootedPath};
pub use num::Rational;
