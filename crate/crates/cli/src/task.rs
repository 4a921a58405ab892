use clap::ValueEnum;
use regroute::formulations::TspMode;
use regroute::model::{validate_solution, ValidationReport};
use regroute::num::{frac, int, to_f64};
use regroute::oracles::{exact_orienteering, exact_regret_tsp_path, exact_rvrp, Bound, Mode, OracleRegretSolver};
use regroute::rounding::{
    solve_p2p, solve_p2p_by_reduction, solve_regret_orienteering, solve_regret_tsp_path, solve_rooted_orienteering,
    solve_rvrp, LpRegretSolver, RegretSolver, RvrpRelaxation,
};
use regroute::{Error, Instance, Node, Problem, Rational, Result, RootedPath};

use crate::report::Sense;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    RootedOrienteering,
    RegretOrienteering,
    P2pOrienteering,
    RvrpR1,
    RvrpR2,
    /// Either routing relaxation; only meaningful for the oracle.
    Rvrp,
    RegretTspPath,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::RootedOrienteering => "rooted-orienteering",
            Kind::RegretOrienteering => "regret-orienteering",
            Kind::P2pOrienteering => "p2p-orienteering",
            Kind::RvrpR1 => "rvrp-r1",
            Kind::RvrpR2 => "rvrp-r2",
            Kind::Rvrp => "rvrp",
            Kind::RegretTspPath => "regret-tsp-path",
        }
    }

    pub fn parse(name: &str) -> Result<Kind> {
        Kind::from_str(name, false).map_err(|_| Error::InvalidArgument(format!("unknown problem {name}")))
    }

    pub fn sense(self) -> Sense {
        match self {
            Kind::RootedOrienteering | Kind::RegretOrienteering | Kind::P2pOrienteering => Sense::Max,
            Kind::RvrpR1 | Kind::RvrpR2 | Kind::Rvrp => Sense::Count,
            Kind::RegretTspPath => Sense::Min,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum P2pMode {
    Lp,
    Reduction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Alpha {
    Oracle,
    Lp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TspForm {
    Full,
    Weak,
    Degree,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub budget: Option<Rational>,
    pub regret: Option<Rational>,
    pub end: Option<String>,
    pub theta: Rational,
    pub p2p_mode: P2pMode,
    pub alpha: Alpha,
    pub tsp_mode: TspForm,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            budget: None,
            regret: None,
            end: None,
            theta: frac(1, 3),
            p2p_mode: P2pMode::Lp,
            alpha: Alpha::Oracle,
            tsp_mode: TspForm::Degree,
        }
    }
}

/// A problem bound to an instance. For problems with an end node the
/// instance carries it.
#[derive(Clone, Debug)]
pub struct Task {
    pub kind: Kind,
    pub inst: Instance,
    pub problem: Problem,
    pub end: Option<Node>,
    pub bound: Option<Rational>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub paths: Vec<RootedPath>,
    pub value: Rational,
    pub lp: Option<f64>,
    pub ratio_bound: f64,
    pub attained: Option<f64>,
}

fn need(value: &Option<Rational>, flag: &str, kind: Kind) -> Result<Rational> {
    value.clone().ok_or_else(|| Error::InvalidArgument(format!("{} needs --{flag}", kind.name())))
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl Task {
    pub fn new(kind: Kind, inst: Instance, opts: &Options) -> Result<Task> {
        let end = match &opts.end {
            Some(label) => Some(inst.node(label)?),
            None => inst.end(),
        };
        let wants_end = matches!(kind, Kind::P2pOrienteering | Kind::RegretTspPath);
        let (problem, bound) = match kind {
            Kind::RootedOrienteering => {
                let b = need(&opts.budget, "budget", kind)?;
                (Problem::RootedOrienteering { budget: b.clone() }, Some(b))
            }
            Kind::P2pOrienteering => {
                let b = need(&opts.budget, "budget", kind)?;
                (Problem::P2pOrienteering { budget: b.clone() }, Some(b))
            }
            Kind::RegretOrienteering => {
                let r = need(&opts.regret, "regret", kind)?;
                (Problem::RegretOrienteering { regret: r.clone() }, Some(r))
            }
            Kind::RvrpR1 | Kind::RvrpR2 | Kind::Rvrp => {
                if opts.theta <= int(0) || opts.theta >= int(1) {
                    return Err(Error::InvalidArgument("theta must lie strictly between 0 and 1".into()));
                }
                let r = need(&opts.regret, "regret", kind)?;
                (Problem::Rvrp { regret: r.clone() }, Some(r))
            }
            Kind::RegretTspPath => (Problem::RegretTspPath, None),
        };
        let inst = if wants_end {
            let t = end.ok_or_else(|| Error::InvalidArgument(format!("{} needs --end", kind.name())))?;
            if t == inst.root() {
                return Err(Error::InvalidArgument("the end node must differ from the root".into()));
            }
            inst.with_end(Some(t))?
        } else {
            inst
        };
        let end = if wants_end { inst.end() } else { None };
        Ok(Task { kind, inst, problem, end, bound })
    }

    fn bound(&self) -> &Rational {
        self.bound.as_ref().expect("bounded problem")
    }

    fn t(&self) -> Node {
        self.end.expect("problem with an end node")
    }

    /// Objective of `paths` recomputed on the instance. The end node's
    /// reward does not count for point-to-point orienteering.
    pub fn value(&self, paths: &[RootedPath]) -> Rational {
        if let (Kind::P2pOrienteering, Some(p)) = (self.kind, paths.first()) {
            return p.reward(&self.inst) - self.inst.reward(self.t());
        }
        match self.kind.sense() {
            Sense::Max => paths.first().map(|p| p.reward(&self.inst)).unwrap_or_else(|| int(0)),
            Sense::Count => int(paths.len() as i64),
            Sense::Min => paths.first().map(|p| p.regret(&self.inst)).unwrap_or_else(|| int(0)),
        }
    }

    pub fn validate(&self, paths: &[RootedPath]) -> Result<ValidationReport> {
        let raw: Vec<Vec<Node>> = paths.iter().map(|p| p.nodes().to_vec()).collect();
        validate_solution(&self.inst, &self.problem, &raw)
    }

    pub fn solve(&self, opts: &Options) -> Result<Outcome> {
        let inst = &self.inst;
        let (paths, lp, cert) = match self.kind {
            Kind::RootedOrienteering => {
                let s = solve_rooted_orienteering(inst, self.bound())?.solution;
                (vec![s.path], s.lp_value, s.certificate)
            }
            Kind::RegretOrienteering => {
                let s = solve_regret_orienteering(inst, self.bound())?.solution;
                (vec![s.path], s.lp_value, s.certificate)
            }
            Kind::P2pOrienteering => {
                let s = match opts.p2p_mode {
                    P2pMode::Lp => solve_p2p(inst, self.t(), self.bound())?.solution,
                    P2pMode::Reduction => {
                        let solver: &dyn RegretSolver = match opts.alpha {
                            Alpha::Oracle => &OracleRegretSolver,
                            Alpha::Lp => &LpRegretSolver,
                        };
                        solve_p2p_by_reduction(inst, self.t(), self.bound(), solver)?
                    }
                };
                (vec![s.path], s.lp_value, s.certificate)
            }
            Kind::RvrpR1 | Kind::RvrpR2 => {
                let which = if self.kind == Kind::RvrpR1 { RvrpRelaxation::Blocks } else { RvrpRelaxation::Intervals };
                let s = solve_rvrp(inst, self.bound(), &opts.theta, which)?.solution;
                (s.paths, s.lp_value, s.certificate)
            }
            Kind::Rvrp => return Err(Error::InvalidArgument("choose rvrp-r1 or rvrp-r2".into())),
            Kind::RegretTspPath => {
                let mode = match opts.tsp_mode {
                    TspForm::Full => TspMode::Full,
                    TspForm::Weak => TspMode::Weak,
                    TspForm::Degree => TspMode::Degree,
                };
                let s = solve_regret_tsp_path(inst, self.t(), mode)?.solution;
                (vec![s.path], s.lp_value, s.certificate)
            }
        };
        let value = self.value(&paths);
        Ok(Outcome { paths, value, lp, ratio_bound: cert.ratio_bound, attained: finite(cert.attained_ratio) })
    }

    pub fn oracle(&self) -> Result<Outcome> {
        let inst = &self.inst;
        let res = match self.kind {
            Kind::RootedOrienteering => exact_orienteering(inst, &Bound::Budget(self.bound().clone()), Mode::Rooted)?,
            Kind::RegretOrienteering => exact_orienteering(inst, &Bound::Regret(self.bound().clone()), Mode::Rooted)?,
            Kind::P2pOrienteering => exact_orienteering(inst, &Bound::Budget(self.bound().clone()), Mode::P2p(self.t()))?,
            Kind::RvrpR1 | Kind::RvrpR2 | Kind::Rvrp => exact_rvrp(inst, self.bound())?,
            Kind::RegretTspPath => exact_regret_tsp_path(inst, self.t())?,
        };
        let value = self.value(&res.paths);
        Ok(Outcome { paths: res.paths, value, lp: None, ratio_bound: 1.0, attained: Some(1.0) })
    }
}

/// Guaranteed ratio of the rounded value against the optimum (or the LP
/// bound, rounded up for counts), as used in reports.
pub fn guarantee(kind: Kind, opts: &Options) -> f64 {
    match kind {
        Kind::RootedOrienteering | Kind::RegretOrienteering => 3.0,
        Kind::P2pOrienteering => match (opts.p2p_mode, opts.alpha) {
            (P2pMode::Lp, _) | (P2pMode::Reduction, Alpha::Lp) => 6.0,
            (P2pMode::Reduction, Alpha::Oracle) => 2.0,
        },
        Kind::RvrpR1 | Kind::RvrpR2 | Kind::Rvrp => {
            let t = &opts.theta;
            let one = int(1);
            let (lead, tail) = if kind == Kind::RvrpR1 { (12, 3) } else { (6, 2) };
            to_f64(&(int(lead) / (&one - t) + int(tail) / t))
        }
        Kind::RegretTspPath => 2.0,
    }
}
