//! Point-to-point orienteering relaxation: per guessed node `v`, an `r`-`v`
//! flow and a `v`-`t` flow sharing one budget row.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::common::*;
use crate::error::{Error, Result};
use crate::graph::ArcVector;
use crate::lp::{Cmp, LpModel, LpSolution, Sense, Var};
use crate::model::{Arc, Instance, Node};
use crate::num::{min_rat, Rational, OPT_TOL};

#[derive(Clone, Debug)]
pub struct P2pBlockVars {
    pub v: Node,
    pub x_rv: BTreeMap<Arc, Var>,
    pub x_vt: BTreeMap<Arc, Var>,
    pub z_rv: BTreeMap<Node, Var>,
    pub z_vt: BTreeMap<Node, Var>,
    pub zvv: Var,
}

#[derive(Clone, Debug)]
pub struct P2pModel {
    pub model: LpModel,
    pub root: Node,
    pub end: Node,
    pub blocks: Vec<P2pBlockVars>,
}

/// `D_u + c(u, t)`, the quantity ordering nodes for the end `t`.
pub fn via_key(inst: &Instance, t: Node, u: Node) -> Rational {
    inst.dist(u) + inst.cost(u, t)
}

fn check_end(inst: &Instance, t: Node) -> Result<()> {
    if t >= inst.n() || t == inst.root() {
        return Err(Error::InvalidArgument(format!("end node {t} must differ from the root")));
    }
    Ok(())
}

fn add_flow_rows(m: &mut LpModel, name: &str, x: &BTreeMap<Arc, Var>, n: usize, p: Node, q: Node, value: Var, banned: &[bool]) {
    let mut t = out_terms(x, p, &one());
    t.push((value, neg(&one())));
    m.add_row(format!("{name}.out"), t, Cmp::Eq, Rational::zero());
    let mut t = in_terms(x, q, &one());
    t.push((value, neg(&one())));
    m.add_row(format!("{name}.in"), t, Cmp::Eq, Rational::zero());
    m.add_row(format!("{name}.src"), in_terms(x, p, &one()), Cmp::Eq, Rational::zero());
    m.add_row(format!("{name}.snk"), out_terms(x, q, &one()), Cmp::Eq, Rational::zero());
    for w in 0..n {
        if w != p && w != q {
            let mut t = in_terms(x, w, &one());
            t.extend(out_terms(x, w, &neg(&one())));
            m.add_row(format!("{name}.bal[{w}]"), t, Cmp::Eq, Rational::zero());
        }
        if banned[w] {
            m.add_row(format!("{name}.far[{w}]"), in_terms(x, w, &one()), Cmp::Eq, Rational::zero());
        }
    }
}

/// Point-to-point orienteering from the root to `t` with budget `budget`.
/// Rewards of the root and `t` are ignored.
pub fn build_p2p(inst: &Instance, t: Node, budget: &Rational) -> Result<P2pModel> {
    check_end(inst, t)?;
    if budget < &Rational::zero() {
        return Err(Error::InvalidArgument("budget must be nonnegative".into()));
    }
    let n = inst.n();
    let r = inst.root();
    let arcs = all_arcs(n);
    let nodes: Vec<Node> = (0..n).collect();
    let reward = |u: Node| if u == r || u == t { Rational::zero() } else { inst.reward(u).clone() };
    let mut m = LpModel::new(Sense::Maximize);
    let mut blocks = Vec::new();
    let mut live = false;
    for v in 0..n {
        let key = via_key(inst, t, v);
        let banned: Vec<bool> = (0..n).map(|w| via_key(inst, t, w) > key).collect();
        let dead = v == r || v == t || &key > budget;
        live |= !dead;
        let zvv = m.add_var(format!("zz[{v}]"));
        if dead {
            m.fix_zero(zvv);
        }
        let x_rv = arc_vars(&mut m, &format!("xr{v}"), &arcs);
        for (&(a, b), &xv) in &x_rv {
            if dead || b == r || a == v || banned[a] || banned[b] {
                m.fix_zero(xv);
            }
        }
        let x_vt = arc_vars(&mut m, &format!("xt{v}"), &arcs);
        for (&(a, b), &xv) in &x_vt {
            if dead || b == v || a == t || banned[a] || banned[b] {
                m.fix_zero(xv);
            }
        }
        add_flow_rows(&mut m, &format!("Fr{v}"), &x_rv, n, r, v, zvv, &banned);
        add_flow_rows(&mut m, &format!("Ft{v}"), &x_vt, n, v, t, zvv, &banned);
        let mut z_rv = BTreeMap::new();
        let mut z_vt = BTreeMap::new();
        for u in 0..n {
            let useless = dead || banned[u] || reward(u).is_zero();
            if u != r {
                let z = m.add_var(format!("zr{v}[{u}]"));
                if useless {
                    m.fix_zero(z);
                }
                m.set_obj(z, reward(u));
                add_cut_flow(&mut m, &format!("gr{v},{u}"), &x_rv, &nodes, r, u, z);
                z_rv.insert(u, z);
            }
            if u != v {
                let z = m.add_var(format!("zt{v}[{u}]"));
                if useless {
                    m.fix_zero(z);
                }
                m.set_obj(z, reward(u));
                add_cut_flow(&mut m, &format!("gt{v},{u}"), &x_vt, &nodes, v, u, z);
                z_vt.insert(u, z);
            }
        }
        let mut cost: Vec<(Var, Rational)> = Vec::new();
        for x in [&x_rv, &x_vt] {
            cost.extend(x.iter().map(|(&(a, b), &xv)| (xv, inst.cost(a, b).clone())));
        }
        cost.push((zvv, -budget.clone()));
        m.add_row(format!("cost{v}"), cost, Cmp::Le, Rational::zero());
        blocks.push(P2pBlockVars { v, x_rv, x_vt, z_rv, z_vt, zvv });
    }
    let all: Vec<Var> = blocks.iter().map(|b| b.zvv).collect();
    // only the direct path is left when no block fits the budget
    let cmp = if live || budget < inst.dist(t) { Cmp::Eq } else { Cmp::Le };
    m.add_sum_row("blocks", &all, cmp, one());
    Ok(P2pModel { model: m, root: r, end: t, blocks })
}

/// One block of an extracted point-to-point solution. `x_tv` is the
/// `v`-`t` flow with every arc reversed, so both halves are preflows rooted
/// at an endpoint.
#[derive(Clone, Debug)]
pub struct P2pBlock {
    pub v: Node,
    pub x_rv: ArcVector,
    pub x_tv: ArcVector,
    pub zvv: Rational,
    /// Weight usable by the root half: exact connectivity of `v`, capped.
    pub k_rv: Rational,
    /// Weight usable by the end half.
    pub k_tv: Rational,
    pub z_rv: BTreeMap<Node, Rational>,
    pub z_vt: BTreeMap<Node, Rational>,
}

#[derive(Clone, Debug)]
pub struct P2pFlowFamily {
    pub root: Node,
    pub end: Node,
    pub blocks: Vec<P2pBlock>,
}

impl P2pFlowFamily {
    pub fn reward(&self, inst: &Instance) -> Rational {
        let mut total = Rational::zero();
        for b in &self.blocks {
            for (&u, z) in b.z_rv.iter().chain(b.z_vt.iter()) {
                if u != self.root && u != self.end {
                    total += inst.reward(u) * z;
                }
            }
        }
        total
    }
}

pub fn extract_p2p_family(pm: &P2pModel, sol: &LpSolution) -> Result<P2pFlowFamily> {
    require_optimal(sol)?;
    let (r, t) = (pm.root, pm.end);
    let mut blocks = Vec::new();
    let mut total = 0.0;
    for b in &pm.blocks {
        let zf = sol.value(b.zvv);
        total += zf;
        if zf <= DROP_TOL {
            continue;
        }
        let zvv = rational(zf)?;
        let mut x_rv = arc_vector(&b.x_rv, sol)?;
        repair_preflow(&mut x_rv, r);
        let forward = arc_vector(&b.x_vt, sol)?;
        let mut x_tv = ArcVector::from_pairs(forward.iter().map(|(&(a, c), val)| ((c, a), val.clone())));
        repair_preflow(&mut x_tv, t);
        let k_rv = snap(zvv.clone(), &x_rv, r, b.v)?;
        let k_tv = snap(zvv.clone(), &x_tv, t, b.v)?;
        let mut z_rv = BTreeMap::new();
        for (&u, &zv) in &b.z_rv {
            let val = if u == b.v { k_rv.clone() } else { min_rat(snap(rational(sol.value(zv))?, &x_rv, r, u)?, k_rv.clone()) };
            if !val.is_zero() {
                z_rv.insert(u, val);
            }
        }
        let mut z_vt = BTreeMap::new();
        for (&u, &zv) in &b.z_vt {
            if u == t {
                continue;
            }
            let val = min_rat(snap(rational(sol.value(zv))?, &x_tv, t, u)?, k_tv.clone());
            if !val.is_zero() {
                z_vt.insert(u, val);
            }
        }
        if !x_rv.is_preflow(r) || !x_tv.is_preflow(t) {
            return Err(Error::Invariant(format!("block {} halves are not preflows", b.v)));
        }
        blocks.push(P2pBlock { v: b.v, x_rv, x_tv, zvv, k_rv, k_tv, z_rv, z_vt });
    }
    if (total - 1.0).abs() > OPT_TOL && !(blocks.is_empty() && total.abs() <= OPT_TOL) {
        return Err(Error::Numerical(format!("block weights sum to {total}")));
    }
    Ok(P2pFlowFamily { root: r, end: t, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve_lp, LpStatus};
    use crate::model::generators::{gk, line3};
    use crate::num::int;

    #[test]
    fn line3_to_b() {
        let inst = line3();
        let pm = build_p2p(&inst, 2, &int(2)).unwrap();
        let sol = solve_lp(&pm.model);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((1.0 - 1e-6..=6.0 + 1e-6).contains(&sol.objective), "{}", sol.objective);
        let fam = extract_p2p_family(&pm, &sol).unwrap();
        assert!(fam.blocks.iter().all(|b| b.x_rv.is_preflow(0) && b.x_tv.is_preflow(2)));
    }

    #[test]
    fn budget_below_direct_cost_is_infeasible() {
        let pm = build_p2p(&line3(), 2, &int(1)).unwrap();
        assert_eq!(solve_lp(&pm.model).status, LpStatus::Infeasible);
    }

    #[test]
    fn direct_path_only() {
        let inst = line3();
        let pm = build_p2p(&inst, 1, &int(1)).unwrap();
        let sol = solve_lp(&pm.model);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!(sol.objective.abs() < 1e-9);
        assert!(extract_p2p_family(&pm, &sol).unwrap().blocks.is_empty());
    }

    #[test]
    fn ladder_at_shortest_budget() {
        let inst = gk(2).unwrap();
        let t = inst.n() - 1;
        let pm = build_p2p(&inst, t, &int(3)).unwrap();
        let sol = solve_lp(&pm.model);
        assert_eq!(sol.status, LpStatus::Optimal);
        // a shortest r-t path has two interior nodes
        assert!(sol.objective >= 2.0 - 1e-6);
        extract_p2p_family(&pm, &sol).unwrap();
    }
}
