//! Regret TSP-path relaxations over arc variables.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::common::*;
use crate::error::{Error, Result};
use crate::graph::ArcVector;
use crate::lp::{Cmp, LpModel, LpSolution, Sense, Var};
use crate::model::{Arc, Instance, Node};
use crate::num::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TspMode {
    /// Unit `r`-`t` flow balance, unit cuts into every set avoiding the root,
    /// regret-metric objective.
    Full,
    /// Preflow with unit cuts and objective `c(x) - D_t`.
    Weak,
    /// `Full` plus unit in- and out-degrees.
    Degree,
}

#[derive(Clone, Debug)]
pub struct TspModel {
    pub model: LpModel,
    pub root: Node,
    pub end: Node,
    pub mode: TspMode,
    pub x: BTreeMap<Arc, Var>,
    /// Constant-one variable used for unit flow values and objective offsets.
    pub unit: Var,
    pub flows: BTreeMap<Node, BTreeMap<Arc, Var>>,
}

pub fn build_regret_tsp_path(inst: &Instance, t: Node, mode: TspMode) -> Result<TspModel> {
    let n = inst.n();
    let r = inst.root();
    if t >= n || t == r {
        return Err(Error::InvalidArgument(format!("end node {t} must differ from the root")));
    }
    let mut m = LpModel::new(Sense::Minimize);
    let x = arc_vars(&mut m, "x", &all_arcs(n));
    let unit = m.add_bounded_var("one", Rational::one(), Some(Rational::one()));
    for (&(a, b), &xv) in &x {
        if mode == TspMode::Weak {
            m.set_obj(xv, inst.cost(a, b).clone());
        } else {
            m.set_obj(xv, inst.regret(a, b));
        }
        if mode == TspMode::Degree && (b == r || a == t) {
            m.fix_zero(xv);
        }
    }
    if mode == TspMode::Weak {
        m.set_obj(unit, -inst.dist(t).clone());
    }
    for v in 0..n {
        let mut terms = in_terms(&x, v, &one());
        terms.extend(out_terms(&x, v, &neg(&one())));
        match mode {
            TspMode::Weak if v != r => m.add_row(format!("pre[{v}]"), terms, Cmp::Ge, Rational::zero()),
            TspMode::Weak => {}
            _ => {
                let b = if v == t { one() } else if v == r { neg(&one()) } else { Rational::zero() };
                m.add_row(format!("bal[{v}]"), terms, Cmp::Eq, b);
            }
        }
        if mode == TspMode::Degree {
            let (din, dout) = if v == r { (0, 1) } else if v == t { (1, 0) } else { (1, 1) };
            m.add_row(format!("indeg[{v}]"), in_terms(&x, v, &one()), Cmp::Eq, Rational::from_integer(din.into()));
            m.add_row(format!("outdeg[{v}]"), out_terms(&x, v, &one()), Cmp::Eq, Rational::from_integer(dout.into()));
        }
    }
    let nodes: Vec<Node> = (0..n).collect();
    let flows = (0..n).filter(|&u| u != r).map(|u| (u, add_cut_flow(&mut m, &format!("f{u}"), &x, &nodes, r, u, unit))).collect();
    Ok(TspModel { model: m, root: r, end: t, mode, x, unit, flows })
}

impl TspModel {
    /// Completes an arc solution with routed cut flows so that it can be
    /// checked against the model.
    pub fn lift_point(&self, x: &ArcVector) -> Result<BTreeMap<Var, Rational>> {
        let nodes = self.x.keys().map(|a| a.0.max(a.1)).max().unwrap_or(0) + 1;
        let mut point = BTreeMap::new();
        for (a, &v) in &self.x {
            point.insert(v, x.get(*a));
        }
        point.insert(self.unit, Rational::one());
        for (&u, fv) in &self.flows {
            let f = route(x, nodes, self.root, u, &Rational::one())?;
            for (a, &v) in fv {
                point.insert(v, f.get(*a));
            }
        }
        Ok(point)
    }
}

#[derive(Clone, Debug)]
pub struct TspPathFlow {
    pub root: Node,
    pub end: Node,
    pub mode: TspMode,
    pub x: ArcVector,
}

/// Rationalized arc solution; every node keeps connectivity one from the root.
pub fn extract_tsp_flow(tm: &TspModel, sol: &LpSolution) -> Result<TspPathFlow> {
    require_optimal(sol)?;
    let mut x = arc_vector(&tm.x, sol)?;
    let nodes: Vec<Node> = tm.flows.keys().copied().collect();
    repair_preflow(&mut x, tm.root);
    repair_connectivity(&mut x, tm.root, &nodes, &Rational::one())?;
    if !x.is_preflow(tm.root) {
        return Err(Error::Invariant("tsp flow is not a preflow".into()));
    }
    Ok(TspPathFlow { root: tm.root, end: tm.end, mode: tm.mode, x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{check_feasibility, solve_lp, LpStatus};
    use crate::model::generators::{gk, gk_point, line3};
    use crate::num::int;

    #[test]
    fn gap_point_is_feasible_with_cost_k() {
        for k in 2..=4 {
            let inst = gk(k).unwrap();
            let tm = build_regret_tsp_path(&inst, inst.n() - 1, TspMode::Degree).unwrap();
            let point = tm.lift_point(&ArcVector::from_pairs(gk_point(k))).unwrap();
            let rep = check_feasibility(&tm.model, &point);
            assert!(rep.feasible, "{:?}", rep.worst_at);
            assert_eq!(rep.objective, int(k as i64));
        }
    }

    #[test]
    fn degree_value_at_most_k() {
        let inst = gk(4).unwrap();
        let tm = build_regret_tsp_path(&inst, inst.n() - 1, TspMode::Degree).unwrap();
        let sol = solve_lp(&tm.model);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!(sol.objective <= 4.0 + 1e-6);
        let flow = extract_tsp_flow(&tm, &sol).unwrap();
        assert!(flow.x.is_preflow(0));
    }

    #[test]
    fn line_is_free() {
        let inst = line3();
        for mode in [TspMode::Full, TspMode::Weak, TspMode::Degree] {
            let sol = solve_lp(&build_regret_tsp_path(&inst, 2, mode).unwrap().model);
            assert!(sol.objective.abs() < 1e-9, "{mode:?}");
        }
    }

    #[test]
    fn rejects_root_as_end() {
        assert!(build_regret_tsp_path(&line3(), 0, TspMode::Full).is_err());
    }
}
