use microlp::{ComparisonOp, OptimizationDirection, Problem, SolveOutcome};
use num_traits::Zero;

use super::model::{Cmp, LpModel, Sense, Var};
use crate::num::{to_f64, FEAS_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// The backend failed or returned a point violating the model by more
    /// than the feasibility tolerance.
    NumericalFailure,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective: f64,
    pub max_violation: f64,
}

impl LpSolution {
    pub fn value(&self, v: Var) -> f64 {
        self.values[v.0]
    }

    fn failed(status: LpStatus, n: usize) -> Self {
        Self { status, values: vec![0.0; n], objective: f64::NAN, max_violation: f64::INFINITY }
    }
}

/// Largest violation of any row or bound, scaled by the row's largest
/// coefficient when that exceeds one.
pub fn max_violation(model: &LpModel, x: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for (j, d) in model.vars().iter().enumerate() {
        worst = worst.max(to_f64(&d.lower) - x[j]);
        if let Some(u) = &d.upper {
            worst = worst.max(x[j] - to_f64(u));
        }
    }
    for row in model.rows() {
        let mut lhs = 0.0;
        let mut scale: f64 = 1.0;
        for (v, c) in &row.terms {
            let c = to_f64(c);
            lhs += c * x[v.0];
            scale = scale.max(c.abs());
        }
        let rhs = to_f64(&row.rhs);
        let viol = match row.cmp {
            Cmp::Le => lhs - rhs,
            Cmp::Ge => rhs - lhs,
            Cmp::Eq => (lhs - rhs).abs(),
        };
        worst = worst.max(viol / scale);
    }
    worst
}

/// Solves with the revised simplex backend after removing fixed variables.
/// Deterministic for identical input.
pub fn solve_lp(model: &LpModel) -> LpSolution {
    let n = model.num_vars();
    let dir = match model.sense() {
        Sense::Minimize => OptimizationDirection::Minimize,
        Sense::Maximize => OptimizationDirection::Maximize,
    };
    let mut p = Problem::new(dir);
    let mut handle = vec![None; n];
    let mut fixed = vec![0.0; n];
    for (j, d) in model.vars().iter().enumerate() {
        if d.is_fixed() {
            fixed[j] = to_f64(&d.lower);
        } else {
            let up = d.upper.as_ref().map_or(f64::INFINITY, to_f64);
            handle[j] = Some(p.add_var(to_f64(&model.objective()[j]), (to_f64(&d.lower), up)));
        }
    }
    for row in model.rows() {
        let mut rhs = to_f64(&row.rhs);
        let mut terms = Vec::with_capacity(row.terms.len());
        for (v, c) in &row.terms {
            match handle[v.0] {
                Some(h) => terms.push((h, to_f64(c))),
                None => rhs -= to_f64(c) * fixed[v.0],
            }
        }
        if terms.is_empty() {
            let ok = match row.cmp {
                Cmp::Le => rhs >= -FEAS_TOL,
                Cmp::Ge => rhs <= FEAS_TOL,
                Cmp::Eq => rhs.abs() <= FEAS_TOL,
            };
            if !ok {
                return LpSolution::failed(LpStatus::Infeasible, n);
            }
            continue;
        }
        let op = match row.cmp {
            Cmp::Le => ComparisonOp::Le,
            Cmp::Ge => ComparisonOp::Ge,
            Cmp::Eq => ComparisonOp::Eq,
        };
        p.add_constraint(terms.as_slice(), op, rhs);
    }
    let sol = match p.solve() {
        Ok(SolveOutcome::Solution(s)) => s,
        Ok(SolveOutcome::Interrupted(_)) => return LpSolution::failed(LpStatus::NumericalFailure, n),
        Err(microlp::Error::Infeasible) => return LpSolution::failed(LpStatus::Infeasible, n),
        Err(microlp::Error::Unbounded) => return LpSolution::failed(LpStatus::Unbounded, n),
        Err(_) => return LpSolution::failed(LpStatus::NumericalFailure, n),
    };
    let values: Vec<f64> = (0..n).map(|j| handle[j].map_or(fixed[j], |h| sol.var_value_raw(h))).collect();
    let objective = values
        .iter()
        .zip(model.objective())
        .filter(|(_, c)| !c.is_zero())
        .map(|(x, c)| x * to_f64(c))
        .sum();
    let max_violation = max_violation(model, &values);
    let status = if max_violation <= FEAS_TOL { LpStatus::Optimal } else { LpStatus::NumericalFailure };
    LpSolution { status, values, objective, max_violation }
}
