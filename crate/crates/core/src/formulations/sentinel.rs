//! Interval-indexed relaxation for regret-bounded vehicle routing and the
//! sentinel structure shared by its rounding.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::common::*;
use crate::error::{Error, Result};
use crate::graph::min_cut;
use crate::lp::{Cmp, LpModel, LpSolution, Sense, Var};
use crate::model::{Instance, Node};
use crate::num::{frac, max_rat, min_rat, to_f64, Rational, OPT_TOL};

/// Closed range of distance values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, d: &Rational) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    /// Whether `self` lies strictly below `other`.
    pub fn before(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentinel {
    pub node: Node,
    pub interval: Interval,
}

/// Fractional sentinels with assignments, connection edges and a flow of
/// sentinel-to-sentinel paths. `regret_budget` bounds the regret of the
/// flow and two thirds of the connection cost.
#[derive(Clone, Debug)]
pub struct SentinelStructure {
    pub root: Node,
    pub clients: Vec<Node>,
    pub sentinels: Vec<Sentinel>,
    /// Weight of each sentinel.
    pub weight: Vec<Rational>,
    /// Fraction of client `v` assigned to sentinel `s`, for `v` other than
    /// the sentinel's own node.
    pub assign: BTreeMap<(usize, Node), Rational>,
    /// Undirected connection edges `(a, b)` with `a < b`.
    pub z: BTreeMap<(Node, Node), Rational>,
    pub f_root: Vec<Rational>,
    pub f_end: Vec<Rational>,
    pub f_next: BTreeMap<(usize, usize), Rational>,
    pub k: Rational,
    pub regret_budget: Rational,
}

impl SentinelStructure {
    /// Total fraction of `v` held by sentinels in `set`.
    pub fn coverage_by(&self, set: impl IntoIterator<Item = usize>, v: Node) -> Rational {
        set.into_iter().fold(Rational::zero(), |acc, s| {
            if self.sentinels[s].node == v {
                acc + &self.weight[s]
            } else {
                acc + self.assign.get(&(s, v)).cloned().unwrap_or_default()
            }
        })
    }

    pub fn coverage(&self, v: Node) -> Rational {
        self.coverage_by(0..self.sentinels.len(), v)
    }

    pub fn z_cost(&self, inst: &Instance) -> Rational {
        self.z.iter().fold(Rational::zero(), |acc, (&(a, b), val)| acc + inst.cost(a, b) * val)
    }

    pub fn flow_regret(&self, inst: &Instance) -> Rational {
        self.f_next.iter().fold(Rational::zero(), |acc, (&(p, q), val)| {
            acc + inst.regret(self.sentinels[p].node, self.sentinels[q].node) * val
        })
    }

    /// Checks the structure's defining inequalities; coverage and the
    /// connection cuts are allowed a relative slack of `tol`.
    pub fn verify(&self, inst: &Instance, tol: f64) -> Result<()> {
        let m = self.sentinels.len();
        let bad = |msg: String| Err(Error::Invariant(msg));
        for (s, sen) in self.sentinels.iter().enumerate() {
            if !sen.interval.contains(inst.dist(sen.node)) {
                return bad(format!("sentinel {s} does not contain its own distance"));
            }
            let inflow = self.f_next.iter().filter(|(k, _)| k.1 == s).fold(self.f_root[s].clone(), |a, (_, v)| a + v);
            let outflow = self.f_next.iter().filter(|(k, _)| k.0 == s).fold(self.f_end[s].clone(), |a, (_, v)| a + v);
            if inflow != self.weight[s] || outflow != self.weight[s] {
                return bad(format!("sentinel {s} flow does not match its weight"));
            }
        }
        for (&(s, v), val) in &self.assign {
            if val > &self.weight[s] || !self.sentinels[s].interval.contains(inst.dist(v)) {
                return bad(format!("assignment of {v} to sentinel {s} is invalid"));
            }
        }
        for &(p, q) in self.f_next.keys() {
            let (a, b) = (&self.sentinels[p], &self.sentinels[q]);
            if !(inst.dist(a.node) < inst.dist(b.node) && a.interval.before(&b.interval)) {
                return bad(format!("flow arc {p}->{q} is not forward"));
            }
        }
        let k: Rational = self.f_root.iter().sum();
        if k != self.k {
            return bad("path count does not match root flow".into());
        }
        if self.flow_regret(inst) > self.regret_budget || self.z_cost(inst) > frac(3, 2) * &self.regret_budget {
            return bad("structure exceeds its regret budget".into());
        }
        for &v in &self.clients {
            if to_f64(&self.coverage(v)) < 1.0 - tol {
                return bad(format!("client {v} is not covered"));
            }
            // send each client's assigned fractions to it over z
            let n = inst.n();
            let mut cap = vec![vec![Rational::zero(); n + 1]; n + 1];
            for (&(a, b), val) in &self.z {
                cap[a][b] += val;
                cap[b][a] += val;
            }
            let mut demand = Rational::zero();
            for s in 0..m {
                let w = self.sentinels[s].node;
                if w == v {
                    continue;
                }
                if let Some(val) = self.assign.get(&(s, v)) {
                    cap[w][n] += val;
                    demand += val;
                }
            }
            let flow = min_cut(&cap, &[v], &[n]).value;
            if to_f64(&(&demand - &flow)) > tol * (1.0 + to_f64(&demand)) {
                return bad(format!("client {v} is not connected to its sentinels"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RvrpR2Model {
    pub model: LpModel,
    pub root: Node,
    pub regret: Rational,
    pub clients: Vec<Node>,
    pub sentinels: Vec<Sentinel>,
    pub x_self: Vec<Var>,
    pub x_assign: BTreeMap<(usize, Node), Var>,
    pub z: BTreeMap<(Node, Node), Var>,
    pub f_root: Vec<Var>,
    pub f_end: Vec<Var>,
    pub f_next: BTreeMap<(usize, usize), Var>,
}

/// Builds the interval relaxation. Clients must sit at positive distance
/// from the root; merge zero-distance nodes first.
pub fn build_rvrp_r2(inst: &Instance, regret: &Rational) -> Result<RvrpR2Model> {
    if regret.is_negative() {
        return Err(Error::InvalidArgument("regret bound must be nonnegative".into()));
    }
    let r = inst.root();
    let clients: Vec<Node> = inst.nodes().filter(|&u| u != r).collect();
    if let Some(u) = clients.iter().find(|&&u| inst.dist(u).is_zero()) {
        return Err(Error::InvalidInstance(format!("node {u} is at distance zero from the root")));
    }
    let dvals: Vec<Rational> = clients.iter().map(|&u| inst.dist(u).clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut sentinels = Vec::new();
    for &u in &clients {
        let du = inst.dist(u);
        for lo in dvals.iter().filter(|d| *d <= du) {
            for hi in dvals.iter().filter(|d| *d >= du) {
                sentinels.push(Sentinel { node: u, interval: Interval::new(lo.clone(), hi.clone()) });
            }
        }
    }
    let mut m = LpModel::new(Sense::Minimize);
    let x_self: Vec<Var> = (0..sentinels.len()).map(|s| m.add_var(format!("xs[{s}]"))).collect();
    let mut x_assign = BTreeMap::new();
    for (s, sen) in sentinels.iter().enumerate() {
        for &v in &clients {
            if v != sen.node && sen.interval.contains(inst.dist(v)) {
                x_assign.insert((s, v), m.add_var(format!("xa[{s},{v}]")));
            }
        }
    }
    let mut z = BTreeMap::new();
    for (i, &a) in clients.iter().enumerate() {
        for &b in &clients[i + 1..] {
            z.insert((a, b), m.add_var(format!("z[{a},{b}]")));
        }
    }
    let f_root: Vec<Var> = (0..sentinels.len()).map(|s| m.add_var(format!("fr[{s}]"))).collect();
    let f_end: Vec<Var> = (0..sentinels.len()).map(|s| m.add_var(format!("ft[{s}]"))).collect();
    let mut f_next = BTreeMap::new();
    for (p, a) in sentinels.iter().enumerate() {
        for (q, b) in sentinels.iter().enumerate() {
            if inst.dist(a.node) < inst.dist(b.node) && a.interval.before(&b.interval) {
                f_next.insert((p, q), m.add_var(format!("fm[{p},{q}]")));
            }
        }
    }

    for &v in &clients {
        let mut terms = Vec::new();
        for (s, sen) in sentinels.iter().enumerate() {
            if sen.node == v {
                terms.push((x_self[s], one()));
            } else if let Some(&xv) = x_assign.get(&(s, v)) {
                terms.push((xv, one()));
            }
        }
        m.add_row(format!("cover[{v}]"), terms, Cmp::Ge, one());
    }
    for (&(s, v), &xv) in &x_assign {
        m.add_row(format!("assign[{s},{v}]"), vec![(xv, one()), (x_self[s], neg(&one()))], Cmp::Le, Rational::zero());
    }
    // connection: each client can route its assigned fractions to their
    // sentinels over the edge capacities z
    for &v in &clients {
        let mut g = BTreeMap::new();
        for &a in &clients {
            for &b in &clients {
                if a != b {
                    let gv = m.add_var(format!("g{v}[{a},{b}]"));
                    if b == v {
                        m.fix_zero(gv);
                    }
                    g.insert((a, b), gv);
                }
            }
        }
        for (&(a, b), &zv) in &z {
            m.add_row(format!("g{v}.cap[{a},{b}]"), vec![(g[&(a, b)], one()), (g[&(b, a)], one()), (zv, neg(&one()))], Cmp::Le, Rational::zero());
        }
        for &w in &clients {
            if w == v {
                continue;
            }
            let mut terms = in_terms(&g, w, &one());
            terms.extend(out_terms(&g, w, &neg(&one())));
            for (s, sen) in sentinels.iter().enumerate() {
                if sen.node == w {
                    if let Some(&xv) = x_assign.get(&(s, v)) {
                        terms.push((xv, neg(&one())));
                    }
                }
            }
            m.add_row(format!("g{v}.bal[{w}]"), terms, Cmp::Eq, Rational::zero());
        }
    }
    for s in 0..sentinels.len() {
        let mut inflow = vec![(f_root[s], one()), (x_self[s], neg(&one()))];
        inflow.extend(f_next.iter().filter(|(k, _)| k.1 == s).map(|(_, &v)| (v, one())));
        m.add_row(format!("in[{s}]"), inflow, Cmp::Eq, Rational::zero());
        let mut outflow = vec![(f_end[s], one()), (x_self[s], neg(&one()))];
        outflow.extend(f_next.iter().filter(|(k, _)| k.0 == s).map(|(_, &v)| (v, one())));
        m.add_row(format!("out[{s}]"), outflow, Cmp::Eq, Rational::zero());
    }
    let mut budget: Vec<(Var, Rational)> = f_next
        .iter()
        .map(|(&(p, q), &v)| (v, inst.regret(sentinels[p].node, sentinels[q].node)))
        .collect();
    budget.extend(f_root.iter().map(|&v| (v, -regret.clone())));
    m.add_row("regret", budget, Cmp::Le, Rational::zero());
    let mut conn: Vec<(Var, Rational)> = z.iter().map(|(&(a, b), &v)| (v, inst.cost(a, b).clone())).collect();
    conn.extend(f_root.iter().map(|&v| (v, -(frac(3, 2) * regret))));
    m.add_row("connect", conn, Cmp::Le, Rational::zero());
    for &v in &f_root {
        m.set_obj(v, one());
    }
    Ok(RvrpR2Model { model: m, root: r, regret: regret.clone(), clients, sentinels, x_self, x_assign, z, f_root, f_end, f_next })
}

/// Rationalizes a solved interval relaxation. Flow conservation is restored
/// sentinel by sentinel in distance order by scaling down excess outflow.
pub fn extract_sentinel_structure(inst: &Instance, rm: &RvrpR2Model, sol: &LpSolution) -> Result<SentinelStructure> {
    require_optimal(sol)?;
    let m = rm.sentinels.len();
    let mut f_root: Vec<Rational> = rm.f_root.iter().map(|&v| rational(sol.value(v))).collect::<Result<_>>()?;
    let mut f_next = BTreeMap::new();
    for (&k, &v) in &rm.f_next {
        let val = rational(sol.value(v))?;
        if !val.is_zero() {
            f_next.insert(k, val);
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| inst.dist(rm.sentinels[a].node).cmp(inst.dist(rm.sentinels[b].node)));
    let mut weight = vec![Rational::zero(); m];
    let mut f_end = vec![Rational::zero(); m];
    for &s in &order {
        let inflow = f_next.iter().filter(|(k, _)| k.1 == s).fold(f_root[s].clone(), |a, (_, v)| a + v);
        let outs: Vec<(usize, usize)> = f_next.keys().filter(|k| k.0 == s).copied().collect();
        let out: Rational = outs.iter().map(|k| f_next[k].clone()).sum();
        if out > inflow {
            let scale = &inflow / &out;
            for k in &outs {
                let val = &f_next[k] * &scale;
                f_next.insert(*k, val);
            }
        }
        let out: Rational = outs.iter().map(|k| f_next[k].clone()).sum();
        f_end[s] = &inflow - out;
        weight[s] = inflow;
    }
    f_next.retain(|_, v| !v.is_zero());
    for (s, w) in weight.iter().enumerate() {
        if w.is_zero() {
            f_root[s] = Rational::zero();
        }
    }
    let mut assign = BTreeMap::new();
    for (&(s, v), &xv) in &rm.x_assign {
        let val = min_rat(rational(sol.value(xv))?, weight[s].clone());
        if !val.is_zero() {
            assign.insert((s, v), val);
        }
    }
    let mut z = BTreeMap::new();
    for (&e, &v) in &rm.z {
        let val = rational(sol.value(v))?;
        if !val.is_zero() {
            z.insert(e, val);
        }
    }
    let k: Rational = f_root.iter().sum();
    let mut st = SentinelStructure {
        root: rm.root,
        clients: rm.clients.clone(),
        sentinels: rm.sentinels.clone(),
        weight,
        assign,
        z,
        f_root,
        f_end,
        f_next,
        k,
        regret_budget: Rational::zero(),
    };
    let nominal = &rm.regret * &st.k;
    let needed = max_rat(st.flow_regret(inst), st.z_cost(inst) / frac(3, 2));
    if to_f64(&needed) > to_f64(&nominal) + OPT_TOL * (1.0 + to_f64(&nominal)) {
        return Err(Error::Numerical("extracted structure exceeds the regret budget".into()));
    }
    st.regret_budget = max_rat(nominal, needed);
    st.verify(inst, OPT_TOL)?;
    Ok(st)
}
