//! Per-block preflow relaxations: budgeted and regret orienteering, the
//! covering model for vehicle routing, and weakened single-flow variants.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::common::*;
use crate::error::{Error, Result};
use crate::graph::ArcVector;
use crate::lp::{max_violation, solve_lp, Cmp, LpModel, LpSolution, LpStatus, Sense, Var};
use crate::num::FEAS_TOL;
use crate::model::{Arc, Instance, Node};
use crate::num::{min_rat, Rational, OPT_TOL};

/// What the block relaxation bounds and optimizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PreflowMode {
    /// Cost of block `v` at most `B z_v`; only nodes no farther than `v`.
    Budget,
    /// Cost of block `v` at most `(D_v + R) z_v`; `v` is the end node.
    Regret,
    /// Regret-style blocks that must cover every node; minimizes block count.
    Cover,
}

#[derive(Clone, Debug)]
pub struct PreflowBlockVars {
    pub v: Node,
    pub x: BTreeMap<Arc, Var>,
    /// Connectivity variables, including the block's own `z_v`.
    pub z: BTreeMap<Node, Var>,
    /// Every variable of the block, flows included.
    pub vars: std::ops::Range<usize>,
}

#[derive(Clone, Debug)]
pub struct PreflowModel {
    pub model: LpModel,
    pub mode: PreflowMode,
    pub root: Node,
    pub blocks: Vec<PreflowBlockVars>,
}

/// Diagnostic weakenings of the budgeted relaxation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeakVariant {
    /// One preflow of value one with cost at most `B`, no blocks.
    SingleFlow,
    /// As `SingleFlow` with the connectivity of the given node forced to one.
    SingleFlowFixed(Node),
    /// Full block model without the rows excluding farther nodes.
    NoDepth,
    /// Full block model whose per-block cost rows are replaced by one shared
    /// row `sum of all block costs <= B`.
    SharedBudget,
}

impl WeakVariant {
    pub fn name(&self) -> String {
        match self {
            WeakVariant::SingleFlow => "single-flow".into(),
            WeakVariant::SingleFlowFixed(v) => format!("single-flow-fixed-{v}"),
            WeakVariant::NoDepth => "no-depth".into(),
            WeakVariant::SharedBudget => "shared-budget".into(),
        }
    }
}

struct BlockOptions {
    depth_rows: bool,
    shared_budget: bool,
}

fn nonneg(b: &Rational, what: &str) -> Result<()> {
    if b < &Rational::zero() {
        return Err(Error::InvalidArgument(format!("{what} must be nonnegative")));
    }
    Ok(())
}

/// Rooted orienteering with budget `budget`.
pub fn build_rooted_orienteering(inst: &Instance, budget: &Rational) -> Result<PreflowModel> {
    nonneg(budget, "budget")?;
    Ok(build_blocks(inst, PreflowMode::Budget, budget, BlockOptions { depth_rows: true, shared_budget: false }))
}

/// Regret orienteering with regret bound `regret`.
pub fn build_regret_orienteering(inst: &Instance, regret: &Rational) -> Result<PreflowModel> {
    nonneg(regret, "regret bound")?;
    Ok(build_blocks(inst, PreflowMode::Regret, regret, BlockOptions { depth_rows: false, shared_budget: false }))
}

/// Covering relaxation for regret-bounded vehicle routing.
pub fn build_rvrp_r1(inst: &Instance, regret: &Rational) -> Result<PreflowModel> {
    nonneg(regret, "regret bound")?;
    Ok(build_blocks(inst, PreflowMode::Cover, regret, BlockOptions { depth_rows: false, shared_budget: false }))
}

fn build_blocks(inst: &Instance, mode: PreflowMode, bound: &Rational, opts: BlockOptions) -> PreflowModel {
    let n = inst.n();
    let r = inst.root();
    let arcs = all_arcs(n);
    let clients: Vec<Node> = (0..n).filter(|&u| u != r).collect();
    let sense = if mode == PreflowMode::Cover { Sense::Minimize } else { Sense::Maximize };
    let mut m = LpModel::new(sense);
    let mut blocks = Vec::new();
    let mut shared_cost = Vec::new();
    for &v in &clients {
        let dv = inst.dist(v).clone();
        let depth = |u: Node| mode == PreflowMode::Budget && opts.depth_rows && inst.dist(u) > &dv;
        let dead = mode == PreflowMode::Budget && !opts.shared_budget && &dv > bound;
        let first = m.num_vars();
        let x = arc_vars(&mut m, &format!("x{v}"), &arcs);
        for (&(a, b), &xv) in &x {
            if dead || b == r || depth(a) || depth(b) {
                m.fix_zero(xv);
            }
        }
        let z: BTreeMap<Node, Var> = clients.iter().map(|&u| (u, m.add_var(format!("z{v}[{u}]")))).collect();
        for (&u, &zv) in &z {
            if dead || depth(u) {
                m.fix_zero(zv);
            }
        }
        for &u in &clients {
            let mut terms = in_terms(&x, u, &one());
            terms.extend(out_terms(&x, u, &neg(&one())));
            m.add_row(format!("pre{v}[{u}]"), terms, Cmp::Ge, Rational::zero());
            if depth(u) {
                m.add_row(format!("depth{v}[{u}]"), in_terms(&x, u, &one()), Cmp::Eq, Rational::zero());
            }
        }
        for &u in &clients {
            add_cut_flow(&mut m, &format!("f{u},{v}"), &x, &(0..n).collect::<Vec<_>>(), r, u, z[&u]);
        }
        let cost: Vec<(Var, Rational)> = x.iter().map(|(&(a, b), &xv)| (xv, inst.cost(a, b).clone())).collect();
        if opts.shared_budget {
            shared_cost.extend(cost);
        } else {
            let cap = if mode == PreflowMode::Budget { bound.clone() } else { &dv + bound };
            let mut terms = cost;
            terms.push((z[&v], -cap));
            m.add_row(format!("cost{v}"), terms, Cmp::Le, Rational::zero());
        }
        let mut terms = out_terms(&x, r, &one());
        terms.push((z[&v], neg(&one())));
        m.add_row(format!("root{v}"), terms, Cmp::Eq, Rational::zero());
        match mode {
            PreflowMode::Cover => m.set_obj(z[&v], one()),
            _ => {
                for (&u, &zv) in &z {
                    m.set_obj(zv, inst.reward(u).clone());
                }
            }
        }
        blocks.push(PreflowBlockVars { v, x, z, vars: first..m.num_vars() });
    }
    if opts.shared_budget {
        m.add_row("cost", shared_cost, Cmp::Le, bound.clone());
    }
    match mode {
        PreflowMode::Cover => {
            for &u in &clients {
                let terms = blocks.iter().map(|b| (b.z[&u], one())).collect();
                m.add_row(format!("cover[{u}]"), terms, Cmp::Ge, one());
            }
        }
        _ => {
            // with every block out of reach only the empty path remains
            let vars: Vec<Var> = blocks.iter().map(|b| b.z[&b.v]).collect();
            let cmp = if vars.iter().all(|&v| m.var(v).is_fixed()) { Cmp::Le } else { Cmp::Eq };
            m.add_sum_row("blocks", &vars, cmp, one());
        }
    }
    PreflowModel { model: m, mode, root: r, blocks }
}

/// Handles of the single-flow variants.
#[derive(Clone, Debug)]
pub struct SingleFlowModel {
    pub model: LpModel,
    pub root: Node,
    pub x: BTreeMap<Arc, Var>,
    pub z: BTreeMap<Node, Var>,
    pub flows: BTreeMap<Node, BTreeMap<Arc, Var>>,
}

impl SingleFlowModel {
    /// Completes an arc solution with connectivities and routed flows.
    pub fn lift_point(&self, x: &ArcVector) -> Result<BTreeMap<Var, Rational>> {
        let n = self.x.keys().map(|a| a.0.max(a.1)).max().unwrap_or(0) + 1;
        let root = self.root;
        let mut point = BTreeMap::new();
        for (a, &v) in &self.x {
            point.insert(v, x.get(*a));
        }
        for (&u, fv) in &self.flows {
            let lam = crate::graph::connectivity(x, root, u)?;
            let f = route(x, n, root, u, &lam)?;
            point.insert(self.z[&u], lam);
            for (a, &v) in fv {
                point.insert(v, f.get(*a));
            }
        }
        Ok(point)
    }
}

/// Weakened budgeted relaxations with their own variable layout.
pub enum WeakModel {
    Single(SingleFlowModel),
    Blocks(PreflowModel),
}

impl WeakModel {
    pub fn model(&self) -> &LpModel {
        match self {
            WeakModel::Single(s) => &s.model,
            WeakModel::Blocks(b) => &b.model,
        }
    }
}

pub fn build_weak_ro_variant(inst: &Instance, budget: &Rational, variant: WeakVariant) -> Result<WeakModel> {
    nonneg(budget, "budget")?;
    match variant {
        WeakVariant::NoDepth => Ok(WeakModel::Blocks(build_blocks(
            inst,
            PreflowMode::Budget,
            budget,
            BlockOptions { depth_rows: false, shared_budget: false },
        ))),
        WeakVariant::SharedBudget => Ok(WeakModel::Blocks(build_blocks(
            inst,
            PreflowMode::Budget,
            budget,
            BlockOptions { depth_rows: true, shared_budget: true },
        ))),
        WeakVariant::SingleFlow | WeakVariant::SingleFlowFixed(_) => {
            let n = inst.n();
            let r = inst.root();
            if let WeakVariant::SingleFlowFixed(v) = variant {
                if v >= n || v == r {
                    return Err(Error::InvalidArgument(format!("cannot fix connectivity of node {v}")));
                }
            }
            let clients: Vec<Node> = (0..n).filter(|&u| u != r).collect();
            let mut m = LpModel::new(Sense::Maximize);
            let x = arc_vars(&mut m, "x", &all_arcs(n));
            for (&(_, b), &xv) in &x {
                if b == r {
                    m.fix_zero(xv);
                }
            }
            let z: BTreeMap<Node, Var> = clients.iter().map(|&u| (u, m.add_var(format!("z[{u}]")))).collect();
            for &u in &clients {
                let mut terms = in_terms(&x, u, &one());
                terms.extend(out_terms(&x, u, &neg(&one())));
                m.add_row(format!("pre[{u}]"), terms, Cmp::Ge, Rational::zero());
                m.set_obj(z[&u], inst.reward(u).clone());
            }
            let nodes: Vec<Node> = (0..n).collect();
            let flows = clients.iter().map(|&u| (u, add_cut_flow(&mut m, &format!("f{u}"), &x, &nodes, r, u, z[&u]))).collect();
            let cost = x.iter().map(|(&(a, b), &xv)| (xv, inst.cost(a, b).clone())).collect();
            m.add_row("cost", cost, Cmp::Le, budget.clone());
            m.add_row("root", out_terms(&x, r, &one()), Cmp::Eq, one());
            if let WeakVariant::SingleFlowFixed(v) = variant {
                m.add_row(format!("fix[{v}]"), vec![(z[&v], one())], Cmp::Eq, one());
            }
            Ok(WeakModel::Single(SingleFlowModel { model: m, root: r, x, z, flows }))
        }
    }
}

/// Solves a budget or regret block model one block at a time. Blocks share
/// only the row `sum z_vv = 1` and each block's constraints are homogeneous
/// in its `z_vv`, so the best block at `z_vv = 1` is an optimal vertex of the
/// whole model.
pub fn solve_blockwise(pm: &PreflowModel) -> Result<LpSolution> {
    if pm.mode == PreflowMode::Cover {
        return Err(Error::InvalidArgument("covering blocks are coupled by their cover rows".into()));
    }
    let full = &pm.model;
    let n = full.num_vars();
    let mut owner = vec![usize::MAX; n];
    for (i, b) in pm.blocks.iter().enumerate() {
        owner[b.vars.clone()].iter_mut().for_each(|o| *o = i);
    }
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); pm.blocks.len()];
    for (j, row) in full.rows().iter().enumerate() {
        let Some(first) = row.terms.first() else { continue };
        let o = owner[first.0 .0];
        if row.terms.iter().all(|(v, _)| owner[v.0] == o) && o != usize::MAX {
            rows[o].push(j);
        } else if row.name != "blocks" {
            return Err(Error::InvalidArgument(format!("row {} couples blocks", row.name)));
        }
    }
    let mut best: Option<LpSolution> = None;
    for (i, b) in pm.blocks.iter().enumerate() {
        let zv = b.z[&b.v];
        if full.var(zv).is_fixed() {
            continue;
        }
        let base = b.vars.start;
        let mut sub = LpModel::new(full.sense());
        for j in b.vars.clone() {
            let d = full.var(Var(j));
            let v = sub.add_bounded_var(d.name.clone(), d.lower.clone(), d.upper.clone());
            sub.set_obj(v, full.obj(Var(j)).clone());
        }
        sub.fix(Var(zv.0 - base), one());
        for &j in &rows[i] {
            let row = &full.rows()[j];
            let terms = row.terms.iter().map(|(v, c)| (Var(v.0 - base), c.clone())).collect();
            sub.add_row(row.name.clone(), terms, row.cmp, row.rhs.clone());
        }
        let sol = solve_lp(&sub);
        if sol.status != LpStatus::Optimal {
            continue;
        }
        if best.as_ref().is_none_or(|bst| sol.objective > bst.objective + 1e-9) {
            let mut values = vec![0.0; n];
            values[b.vars.clone()].copy_from_slice(&sol.values);
            best = Some(LpSolution { status: LpStatus::Optimal, values, objective: sol.objective, max_violation: 0.0 });
        }
    }
    let mut sol = match best {
        Some(s) => s,
        None => solve_lp(full),
    };
    if sol.status == LpStatus::Optimal {
        sol.max_violation = max_violation(full, &sol.values);
        if sol.max_violation > FEAS_TOL {
            sol.status = LpStatus::NumericalFailure;
        }
    }
    Ok(sol)
}

/// One block of an extracted preflow solution.
#[derive(Clone, Debug)]
pub struct PreflowBlock {
    pub v: Node,
    pub x: ArcVector,
    /// Connectivity values `z_u`, each at most the exact connectivity under `x`.
    pub z: BTreeMap<Node, Rational>,
    /// Block weight, equal to the exact connectivity of `v` (capped).
    pub zvv: Rational,
}

#[derive(Clone, Debug)]
pub struct PreflowFamily {
    pub mode: PreflowMode,
    pub root: Node,
    pub blocks: Vec<PreflowBlock>,
}

impl PreflowFamily {
    /// Objective of the rationalized family.
    pub fn reward(&self, inst: &Instance) -> Rational {
        self.blocks.iter().flat_map(|b| b.z.iter()).fold(Rational::zero(), |acc, (&u, z)| acc + inst.reward(u) * z)
    }

    pub fn total_weight(&self) -> Rational {
        self.blocks.iter().fold(Rational::zero(), |acc, b| acc + &b.zvv)
    }
}

/// Rationalizes a solved block model. Blocks with negligible weight are
/// dropped; each kept arc vector is an exact preflow and each `z` is snapped
/// to the exact connectivity.
pub fn extract_preflow_family(pm: &PreflowModel, sol: &LpSolution) -> Result<PreflowFamily> {
    require_optimal(sol)?;
    let r = pm.root;
    let mut blocks = Vec::new();
    for b in &pm.blocks {
        if sol.value(b.z[&b.v]) <= DROP_TOL {
            continue;
        }
        let mut x = arc_vector(&b.x, sol)?;
        repair_preflow(&mut x, r);
        let zvv = snap(rational(sol.value(b.z[&b.v]))?, &x, r, b.v)?;
        if zvv.is_zero() {
            continue;
        }
        let mut z = BTreeMap::new();
        for (&u, &zv) in &b.z {
            let val = if u == b.v { zvv.clone() } else { min_rat(snap(rational(sol.value(zv))?, &x, r, u)?, zvv.clone()) };
            if !val.is_zero() {
                z.insert(u, val);
            }
        }
        blocks.push(PreflowBlock { v: b.v, x, z, zvv });
    }
    let fam = PreflowFamily { mode: pm.mode, root: r, blocks };
    let clients: Vec<Node> = pm.blocks.iter().map(|b| b.v).collect();
    verify_family(&fam, &clients)?;
    Ok(fam)
}

fn verify_family(fam: &PreflowFamily, clients: &[Node]) -> Result<()> {
    for b in &fam.blocks {
        if !b.x.is_preflow(fam.root) {
            return Err(Error::Invariant(format!("block {} is not a preflow", b.v)));
        }
        if b.z.values().any(|z| z > &b.zvv) {
            return Err(Error::Invariant(format!("block {} has connectivity above its weight", b.v)));
        }
    }
    let total = crate::num::to_f64(&fam.total_weight());
    match fam.mode {
        PreflowMode::Cover => {
            let mut cover: BTreeMap<Node, Rational> = clients.iter().map(|&u| (u, Rational::zero())).collect();
            for b in &fam.blocks {
                for (&u, z) in &b.z {
                    *cover.entry(u).or_insert_with(Rational::zero) += z;
                }
            }
            if let Some((u, c)) = cover.iter().find(|(_, c)| crate::num::to_f64(c) < 1.0 - OPT_TOL) {
                return Err(Error::Numerical(format!("node {u} covered only {c}")));
            }
        }
        _ if (total - 1.0).abs() > OPT_TOL && !fam.blocks.is_empty() => {
            return Err(Error::Numerical(format!("block weights sum to {total}")));
        }
        _ => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{check_feasibility, solve_lp, LpStatus};
    use crate::model::generators::{line3, ro_gap, ro_gap_point, star3};
    use crate::num::int;

    fn value(m: &LpModel) -> f64 {
        let sol = solve_lp(m);
        assert_eq!(sol.status, LpStatus::Optimal);
        sol.objective
    }

    #[test]
    fn line3_variable_count() {
        let pm = build_rooted_orienteering(&line3(), &int(2)).unwrap();
        assert_eq!(pm.model.num_vars(), 40);
    }

    #[test]
    fn line3_budget_values() {
        let v = value(&build_rooted_orienteering(&line3(), &int(2)).unwrap().model);
        assert!((3.0 - 1e-6..=9.0 + 1e-6).contains(&v), "{v}");
        let v0 = value(&build_rooted_orienteering(&line3(), &int(0)).unwrap().model);
        assert!(v0.abs() < 1e-9);
    }

    #[test]
    fn star3_regret_values() {
        let v0 = value(&build_regret_orienteering(&star3(), &int(0)).unwrap().model);
        assert!((1.0 - 1e-6..=3.0 + 1e-6).contains(&v0), "{v0}");
        let v2 = value(&build_regret_orienteering(&star3(), &int(2)).unwrap().model);
        assert!((2.0 - 1e-6..=6.0 + 1e-6).contains(&v2), "{v2}");
        let line = value(&build_regret_orienteering(&line3(), &int(0)).unwrap().model);
        assert!((3.0 - 1e-6..=9.0 + 1e-6).contains(&line), "{line}");
    }

    #[test]
    fn cover_values() {
        let v0 = value(&build_rvrp_r1(&star3(), &int(0)).unwrap().model);
        assert!((v0 - 3.0).abs() < 1e-6, "{v0}");
        let v2 = value(&build_rvrp_r1(&star3(), &int(2)).unwrap().model);
        assert!(v2 <= 2.0 + 1e-6, "{v2}");
        let cost = vec![vec![int(0), int(3)], vec![int(3), int(0)]];
        let single = Instance::new("one", vec!["r".into(), "a".into()], 0, None, cost, vec![int(0), int(1)]).unwrap();
        let v = value(&build_rvrp_r1(&single, &int(5)).unwrap().model);
        assert!((v - 1.0).abs() < 1e-6);
    }

    #[test]
    fn extraction_sums_to_one() {
        let inst = line3();
        let pm = build_rooted_orienteering(&inst, &int(2)).unwrap();
        let fam = extract_preflow_family(&pm, &solve_lp(&pm.model)).unwrap();
        assert_eq!(fam.total_weight(), int(1));
        assert!(fam.blocks.iter().all(|b| !b.zvv.is_zero()));
        let pm = build_rooted_orienteering(&inst, &int(0)).unwrap();
        assert!(extract_preflow_family(&pm, &solve_lp(&pm.model)).unwrap().blocks.is_empty());
    }

    #[test]
    fn single_flow_point_is_feasible() {
        let inst = ro_gap(10).unwrap();
        let x = ArcVector::from_pairs(ro_gap_point(10));
        for variant in [WeakVariant::SingleFlow, WeakVariant::SingleFlowFixed(1)] {
            let WeakModel::Single(sm) = build_weak_ro_variant(&inst, &int(10), variant).unwrap() else { panic!() };
            let rep = check_feasibility(&sm.model, &sm.lift_point(&x).unwrap());
            assert!(rep.feasible, "{:?}", rep.worst_at);
            assert_eq!(rep.objective, int(6));
        }
    }

    #[test]
    fn weak_variants_dominate_full_model() {
        let inst = ro_gap(6).unwrap();
        let full = value(&build_rooted_orienteering(&inst, &int(6)).unwrap().model);
        for variant in [WeakVariant::SingleFlow, WeakVariant::NoDepth, WeakVariant::SharedBudget] {
            let weak = value(build_weak_ro_variant(&inst, &int(6), variant).unwrap().model());
            assert!(weak >= 4.0 - 1e-6, "{} {weak}", variant.name());
            assert!(weak >= full - 1e-6);
        }
    }

    #[test]
    fn blockwise_matches_joint_solve() {
        let mut cases = vec![(line3(), int(2)), (star3(), int(3)), (line3(), int(0))];
        for seed in 0..6 {
            let inst = crate::model::generators::euclidean(4, seed, 10.0).unwrap();
            let b = inst.max_dist() * crate::num::frac(3, 2);
            cases.push((inst, b));
        }
        for (inst, b) in cases {
            for pm in [build_rooted_orienteering(&inst, &b).unwrap(), build_regret_orienteering(&inst, &b).unwrap()] {
                let joint = solve_lp(&pm.model);
                let split = solve_blockwise(&pm).unwrap();
                assert_eq!(split.status, LpStatus::Optimal);
                assert!((joint.objective - split.objective).abs() < 1e-6, "{} {} {}", inst.name(), joint.objective, split.objective);
                extract_preflow_family(&pm, &split).unwrap();
            }
        }
        let pm = build_rvrp_r1(&star3(), &int(0)).unwrap();
        assert!(solve_blockwise(&pm).is_err());
    }
}
