use num_traits::Zero;
use serde::Serialize;

use super::instance::{Instance, Node};
use super::path::RootedPath;
use crate::error::{Error, Result};
use crate::num::Rational;

/// Problem variants together with the bound each one carries.
#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    RootedOrienteering { budget: Rational },
    RegretOrienteering { regret: Rational },
    P2pOrienteering { budget: Rational },
    Rvrp { regret: Rational },
    RegretTspPath,
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::RootedOrienteering { .. } => "rooted-orienteering",
            Problem::RegretOrienteering { .. } => "regret-orienteering",
            Problem::P2pOrienteering { .. } => "p2p-orienteering",
            Problem::Rvrp { .. } => "rvrp",
            Problem::RegretTspPath => "regret-tsp-path",
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Certificate {
    pub ratio_bound: f64,
    pub attained_ratio: f64,
}

/// Single path with its reward and the LP bound behind its guarantee.
#[derive(Clone, Debug)]
pub struct OrienteeringSolution {
    pub path: RootedPath,
    pub reward: Rational,
    pub lp_value: Option<f64>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug)]
pub struct RvrpSolution {
    pub paths: Vec<RootedPath>,
    pub regret: Rational,
    pub lp_value: Option<f64>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug)]
pub struct TspPathSolution {
    pub path: RootedPath,
    pub regret: Rational,
    pub lp_value: Option<f64>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    /// First violated constraint, if any.
    pub violation: Option<String>,
    /// Reward of distinct visited nodes (orienteering) or zero.
    pub reward: Rational,
    pub paths: usize,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Recomputes feasibility and objective of raw node sequences from scratch.
/// Structural problems (wrong root, repeated node) are errors; constraint
/// violations are reported.
pub fn validate_solution(inst: &Instance, problem: &Problem, paths: &[Vec<Node>]) -> Result<ValidationReport> {
    let paths = paths
        .iter()
        .map(|p| RootedPath::new(inst, p.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut violation = None;
    let mut fail = |msg: String| {
        if violation.is_none() {
            violation = Some(msg);
        }
    };
    let single = matches!(problem, Problem::Rvrp { .. }).then_some(()).is_none();
    if single && paths.len() != 1 {
        return Err(Error::InvalidArgument(format!("{} expects exactly one path", problem.name())));
    }
    let mut visited = vec![false; inst.n()];
    for p in &paths {
        for &v in p.nodes() {
            visited[v] = true;
        }
    }
    let reward = inst
        .nodes()
        .filter(|&v| visited[v])
        .fold(Rational::zero(), |acc, v| acc + inst.reward(v));
    match problem {
        Problem::RootedOrienteering { budget } => {
            if &paths[0].cost(inst) > budget {
                fail("budget exceeded".into());
            }
        }
        Problem::RegretOrienteering { regret } => {
            if &paths[0].regret(inst) > regret {
                fail("regret bound exceeded".into());
            }
        }
        Problem::P2pOrienteering { budget } => {
            let t = inst.end().ok_or_else(|| Error::InvalidArgument("instance has no end node".into()))?;
            if paths[0].end() != t {
                fail("path does not end at the end node".into());
            }
            if &paths[0].cost(inst) > budget {
                fail("budget exceeded".into());
            }
        }
        Problem::Rvrp { regret } => {
            for (i, p) in paths.iter().enumerate() {
                if &p.regret(inst) > regret {
                    fail(format!("path {i} exceeds the regret bound"));
                }
            }
            if let Some(v) = inst.clients().into_iter().find(|&v| !visited[v]) {
                fail(format!("coverage: client {} not visited", inst.label(v)));
            }
        }
        Problem::RegretTspPath => {
            let t = inst.end().ok_or_else(|| Error::InvalidArgument("instance has no end node".into()))?;
            if paths[0].end() != t {
                fail("path does not end at the end node".into());
            }
            if let Some(v) = inst.nodes().find(|&v| !visited[v]) {
                fail(format!("coverage: node {} not visited", inst.label(v)));
            }
        }
    }
    Ok(ValidationReport { violation, reward, paths: paths.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::generators::{gk, line3, star3};
    use crate::num::int;

    #[test]
    fn line_orienteering_passes() {
        let rep = validate_solution(&line3(), &Problem::RootedOrienteering { budget: int(2) }, &[vec![0, 1, 2]]).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.reward, int(3));
    }

    #[test]
    fn star_single_route_exceeds_zero_regret() {
        let rep = validate_solution(&star3(), &Problem::Rvrp { regret: int(0) }, &[vec![0, 1, 2, 3]]).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn tsp_path_missing_node_fails_coverage() {
        let g = gk(4).unwrap();
        let v3 = g.node("v3").unwrap();
        let seq: Vec<Node> = g.nodes().filter(|&v| v != v3 && v != g.end().unwrap()).chain([g.end().unwrap()]).collect();
        let rep = validate_solution(&g, &Problem::RegretTspPath, &[seq]).unwrap();
        assert!(rep.violation.unwrap().starts_with("coverage"));
    }

    #[test]
    fn malformed_is_error() {
        assert!(validate_solution(&line3(), &Problem::Rvrp { regret: int(1) }, &[vec![1, 2]]).is_err());
    }
}
