use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{capacity_matrix, connectivity, decompose_flow_paths, max_flow, ArcVector};
use crate::lp::{Cmp, LpModel, LpSolution, LpStatus, Var};
use crate::model::{Arc, Node};
use crate::num::{min_rat, near_f64, Rational, FEAS_TOL, MAX_DENOMINATOR};

/// Values at or below this are treated as zero when extracting.
pub const DROP_TOL: f64 = 1e-9;

/// Extracted values take the simplest fraction this close.
const SNAP_TOL: f64 = 1e-10;

pub(crate) fn all_arcs(n: usize) -> Vec<Arc> {
    (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect()
}

pub(crate) fn one() -> Rational {
    Rational::one()
}

pub(crate) fn neg(r: &Rational) -> Rational {
    -r.clone()
}

/// One variable per arc named `{prefix}[u,v]`.
pub(crate) fn arc_vars(m: &mut LpModel, prefix: &str, arcs: &[Arc]) -> BTreeMap<Arc, Var> {
    arcs.iter().map(|&(u, v)| ((u, v), m.add_var(format!("{prefix}[{u},{v}]")))).collect()
}

pub(crate) fn in_terms(x: &BTreeMap<Arc, Var>, w: Node, coef: &Rational) -> Vec<(Var, Rational)> {
    x.iter().filter(|(a, _)| a.1 == w).map(|(_, &v)| (v, coef.clone())).collect()
}

pub(crate) fn out_terms(x: &BTreeMap<Arc, Var>, w: Node, coef: &Rational) -> Vec<(Var, Rational)> {
    x.iter().filter(|(a, _)| a.0 == w).map(|(_, &v)| (v, coef.clone())).collect()
}

/// Flow of value `value` from `source` to `target` bounded arcwise by `cap`;
/// this encodes that every cut separating `target` from `source` has
/// capacity at least `value`.
pub(crate) fn add_cut_flow(
    m: &mut LpModel,
    name: &str,
    cap: &BTreeMap<Arc, Var>,
    nodes: &[Node],
    source: Node,
    target: Node,
    value: Var,
) -> BTreeMap<Arc, Var> {
    let arcs: Vec<Arc> = cap.keys().copied().collect();
    let f = arc_vars(m, name, &arcs);
    let off = m.var(value).is_fixed() && m.var(value).upper.as_ref().is_some_and(|u| u.is_zero());
    for (&(a, b), &fv) in &f {
        if off || b == source || a == target || m.var(cap[&(a, b)]).upper.as_ref().is_some_and(|u| u.is_zero()) {
            m.fix_zero(fv);
        }
        m.add_row(format!("{name}.cap[{a},{b}]"), vec![(cap[&(a, b)], one()), (fv, neg(&one()))], Cmp::Ge, Rational::zero());
    }
    for &w in nodes {
        if w == source {
            continue;
        }
        let mut terms = in_terms(&f, w, &one());
        terms.extend(out_terms(&f, w, &neg(&one())));
        if w == target {
            terms.push((value, neg(&one())));
        }
        m.add_row(format!("{name}.bal[{w}]"), terms, Cmp::Eq, Rational::zero());
    }
    f
}

pub(crate) fn require_optimal(sol: &LpSolution) -> Result<()> {
    match sol.status {
        LpStatus::Optimal => Ok(()),
        LpStatus::Infeasible => Err(Error::Infeasible("linear program is infeasible".into())),
        LpStatus::Unbounded => Err(Error::Numerical("linear program is unbounded".into())),
        LpStatus::NumericalFailure => {
            Err(Error::Numerical(format!("solver point violates the model by {:e}", sol.max_violation)))
        }
    }
}

/// Clamps tiny negatives and snaps to a nearby rational.
pub(crate) fn rational(x: f64) -> Result<Rational> {
    if x < -FEAS_TOL || !x.is_finite() {
        return Err(Error::Numerical(format!("value {x} is negative beyond tolerance")));
    }
    if x <= DROP_TOL {
        return Ok(Rational::zero());
    }
    Ok(near_f64(x, SNAP_TOL, MAX_DENOMINATOR))
}

pub(crate) fn arc_vector(vars: &BTreeMap<Arc, Var>, sol: &LpSolution) -> Result<ArcVector> {
    let mut x = ArcVector::new();
    for (&a, &v) in vars {
        x.set(a, rational(sol.value(v))?);
    }
    Ok(x)
}

/// Covers every deficit at a non-root node by extra flow on its root arc, so
/// that rounding noise cannot break the preflow property.
pub(crate) fn repair_preflow(x: &mut ArcVector, root: Node) {
    for (v, e) in x.excess() {
        if v != root && e.is_negative() {
            x.add((root, v), &-e);
        }
    }
}

/// Raises the connectivity of every listed node to at least `k` through its
/// root arc. Each root arc crosses every cut around its head.
pub(crate) fn repair_connectivity(x: &mut ArcVector, root: Node, nodes: &[Node], k: &Rational) -> Result<()> {
    for &v in nodes {
        if v == root {
            continue;
        }
        let lam = connectivity(x, root, v)?;
        if &lam < k {
            x.add((root, v), &(k - lam));
        }
    }
    Ok(())
}

/// Snaps a connectivity value to the exact one of `x`.
pub(crate) fn snap(z: Rational, x: &ArcVector, root: Node, v: Node) -> Result<Rational> {
    Ok(min_rat(z, connectivity(x, root, v)?))
}

/// Flow of value `value` from `root` to `u` within `x`, free of cycles.
pub(crate) fn route(x: &ArcVector, n: usize, root: Node, u: Node, value: &Rational) -> Result<ArcVector> {
    if value.is_zero() {
        return Ok(ArcVector::new());
    }
    let (lam, flow) = max_flow(&capacity_matrix(x, n), root, u);
    if &lam < value {
        return Err(Error::InvalidArgument(format!("connectivity of node {u} is {lam}, below {value}")));
    }
    let mut f = ArcVector::new();
    for (a, row) in flow.iter().enumerate() {
        for (b, val) in row.iter().enumerate() {
            f.set((a, b), val * value / &lam);
        }
    }
    Ok(decompose_flow_paths(&f, root, u)?.arc_sums())
}
