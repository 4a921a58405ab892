//! Instances, rooted paths, regret arithmetic, generators and validation.

pub mod generators;
pub mod instance;
pub mod io;
pub mod merge;
pub mod path;
pub mod solution;

pub use instance::{Arc, Instance, Node};
pub use merge::{merge_zero_distance, MergeMap};
pub use path::{path_regret, RootedPath};
pub use solution::{
    validate_solution, Certificate, OrienteeringSolution, Problem, RvrpSolution, TspPathSolution, ValidationReport,
};
