use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::split::split_path;
use crate::error::{invariant, Error, Result};
use crate::formulations::p2p::via_key;
use crate::formulations::{
    build_p2p, build_regret_orienteering, build_rooted_orienteering, extract_p2p_family, extract_preflow_family, solve_blockwise,
    P2pFlowFamily, PreflowFamily, PreflowMode,
};
use crate::graph::{pack_arborescences, tree_to_path, verify_packing, ArcVector, TreeWalk};
use crate::lp::solve_lp;
use crate::model::{Certificate, Instance, Node, OrienteeringSolution, RootedPath};
use crate::num::{int, to_f64, Rational, OPT_TOL};

/// Per-block accounting: the packed paths' weighted regret against twice
/// the block weight times its regret allowance, and their weighted segment
/// count against three times the block weight.
#[derive(Clone, Debug)]
pub struct BlockAccount {
    pub v: Node,
    /// Root the block's trees hang from.
    pub root: Node,
    pub weight: Rational,
    pub allowance: Rational,
    pub regret_sum: Rational,
    pub count_sum: Rational,
}

impl BlockAccount {
    pub fn regret_cap(&self) -> Rational {
        int(2) * &self.weight * &self.allowance
    }

    pub fn count_cap(&self) -> Rational {
        int(3) * &self.weight
    }
}

#[derive(Clone, Debug)]
pub struct OrienteeringRounding {
    pub solution: OrienteeringSolution,
    pub accounts: Vec<BlockAccount>,
    /// Every candidate path produced before selection.
    pub candidates: usize,
}

/// Higher reward first, then lower cost, then the smaller node sequence.
fn better(inst: &Instance, a: &RootedPath, b: &RootedPath) -> bool {
    let key = |p: &RootedPath| (p.reward(inst), p.cost(inst));
    let (ra, ca) = key(a);
    let (rb, cb) = key(b);
    match ra.cmp(&rb) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match ca.cmp(&cb) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => a.nodes() < b.nodes(),
        },
    }
}

fn pick_best(inst: &Instance, paths: impl IntoIterator<Item = RootedPath>) -> Option<RootedPath> {
    let mut best: Option<RootedPath> = None;
    for p in paths {
        if best.as_ref().is_none_or(|b| better(inst, &p, b)) {
            best = Some(p);
        }
    }
    best
}

/// Packs `x` with `k` trees at `root`, turns every tree into a path ending
/// at `v` and cuts it into segments of regret at most `allowance`. `metric`
/// is an instance rooted at `root`.
fn pack_and_split(
    metric: &Instance,
    x: &ArcVector,
    v: Node,
    k: &Rational,
    allowance: &Rational,
) -> Result<(Vec<(RootedPath, Rational)>, BlockAccount)> {
    let root = metric.root();
    let fam = pack_arborescences(x, root, k)?;
    verify_packing(x, root, k, &fam)?;
    let mut out = Vec::new();
    let mut regret_sum = Rational::zero();
    let mut count_sum = Rational::zero();
    let dv = metric.dist(v);
    for (tree, gamma) in &fam.trees {
        if !tree.contains(v) {
            return invariant(format!("packed tree misses block node {v}"));
        }
        let nodes = tree_to_path(&tree.arcs, TreeWalk::EndAt { root, v })?;
        let path = RootedPath::new(metric, nodes)?;
        let reg = path.regret(metric);
        if reg > int(2) * (tree.cost(metric) - dv) {
            return invariant(format!("tree walk to {v} exceeds twice the tree's excess"));
        }
        regret_sum += gamma * &reg;
        let segs = split_path(metric, &path, allowance);
        count_sum += gamma * Rational::from_integer(segs.len().into());
        out.extend(segs.into_iter().map(|s| (s, gamma.clone())));
    }
    let account = BlockAccount { v, root, weight: k.clone(), allowance: allowance.clone(), regret_sum, count_sum };
    Ok((out, account))
}

fn certificate(lp: f64, reward: &Rational, bound: f64) -> Certificate {
    let got = to_f64(reward);
    let attained = if got > 0.0 { lp / got } else if lp <= OPT_TOL { 1.0 } else { f64::INFINITY };
    Certificate { ratio_bound: bound, attained_ratio: attained }
}

fn check_accounts(accounts: &[BlockAccount]) -> Result<()> {
    for a in accounts {
        let slack = OPT_TOL * (1.0 + to_f64(&a.weight));
        if to_f64(&(&a.count_sum - a.count_cap())) > slack * (1.0 + to_f64(&a.count_sum)) {
            return invariant(format!("block {} splits into {} weighted paths", a.v, a.count_sum));
        }
    }
    Ok(())
}

fn round_preflow(inst: &Instance, fam: &PreflowFamily, bound: &Rational) -> Result<OrienteeringRounding> {
    let r = inst.root();
    let mut candidates = Vec::new();
    let mut accounts = Vec::new();
    for b in &fam.blocks {
        let allowance = match fam.mode {
            PreflowMode::Budget => bound - inst.dist(b.v),
            _ => bound.clone(),
        };
        if allowance.is_negative() {
            return invariant(format!("block {} lies beyond the budget", b.v));
        }
        let (segs, account) = pack_and_split(inst, &b.x, b.v, &b.zvv, &allowance)?;
        candidates.extend(segs);
        accounts.push(account);
    }
    check_accounts(&accounts)?;
    let lp = to_f64(&fam.reward(inst));
    // weighted average reward is at least a third of the family's objective
    let total_weight: Rational = candidates.iter().map(|(_, w)| w.clone()).sum();
    if !total_weight.is_zero() {
        let avg = candidates.iter().fold(Rational::zero(), |acc, (p, w)| acc + p.reward(inst) * w) / &total_weight;
        if to_f64(&avg) < lp / 3.0 - OPT_TOL * (1.0 + lp) {
            return invariant(format!("average candidate reward {avg} is below a third of {lp}"));
        }
    }
    let count = candidates.len();
    let path = pick_best(inst, candidates.into_iter().map(|(p, _)| p)).unwrap_or_else(|| RootedPath::from_vec(vec![r]));
    let reward = path.reward(inst);
    Ok(OrienteeringRounding {
        solution: OrienteeringSolution { certificate: certificate(lp, &reward, 3.0), path, reward, lp_value: Some(lp) },
        accounts,
        candidates: count,
    })
}

/// Rounds a budgeted block family to one path of cost at most `budget`.
pub fn round_rooted_orienteering(inst: &Instance, fam: &PreflowFamily, budget: &Rational) -> Result<OrienteeringRounding> {
    if fam.mode != PreflowMode::Budget {
        return Err(Error::InvalidArgument("family does not come from the budgeted relaxation".into()));
    }
    let out = round_preflow(inst, fam, budget)?;
    if &out.solution.path.cost(inst) > budget {
        return invariant("rounded path exceeds the budget".to_string());
    }
    Ok(out)
}

/// Rounds a regret block family to one path of regret at most `regret`.
pub fn round_regret_orienteering(inst: &Instance, fam: &PreflowFamily, regret: &Rational) -> Result<OrienteeringRounding> {
    if fam.mode != PreflowMode::Regret {
        return Err(Error::InvalidArgument("family does not come from the regret relaxation".into()));
    }
    let out = round_preflow(inst, fam, regret)?;
    if &out.solution.path.regret(inst) > regret {
        return invariant("rounded path exceeds the regret bound".to_string());
    }
    Ok(out)
}

fn direct(inst: &Instance, t: Node) -> RootedPath {
    RootedPath::from_vec(vec![inst.root(), t])
}

fn require_reachable(inst: &Instance, t: Node, budget: &Rational) -> Result<()> {
    if t >= inst.n() || t == inst.root() {
        return Err(Error::InvalidArgument(format!("end node {t} must differ from the root")));
    }
    if inst.dist(t) > budget {
        return Err(Error::Infeasible(format!("budget {budget} is below the direct cost {}", inst.dist(t))));
    }
    Ok(())
}

/// `r`, then `middle` without `r` and `t`, then `t`.
fn through(inst: &Instance, t: Node, middle: impl IntoIterator<Item = Node>) -> RootedPath {
    let r = inst.root();
    let mut nodes = vec![r];
    nodes.extend(middle.into_iter().filter(|&u| u != r && u != t));
    nodes.push(t);
    RootedPath::from_vec(nodes)
}

/// Rounds a point-to-point family: both halves of every block are packed
/// and split with the block's regret allowance, and every segment is closed
/// into an `r`-`t` path.
pub fn round_p2p(inst: &Instance, fam: &P2pFlowFamily, budget: &Rational) -> Result<OrienteeringRounding> {
    let t = fam.end;
    require_reachable(inst, t, budget)?;
    let from_end = inst.rerooted(t)?;
    let mut candidates = vec![(direct(inst, t), Rational::zero())];
    let mut accounts = Vec::new();
    for b in &fam.blocks {
        let allowance = budget - via_key(inst, t, b.v);
        if allowance.is_negative() {
            return invariant(format!("block {} lies beyond the budget", b.v));
        }
        let (segs, acc) = pack_and_split(inst, &b.x_rv, b.v, &b.k_rv, &allowance)?;
        candidates.extend(segs.into_iter().map(|(s, w)| (through(inst, t, s.into_nodes()), w)));
        accounts.push(acc);
        let (segs, acc) = pack_and_split(&from_end, &b.x_tv, b.v, &b.k_tv, &allowance)?;
        candidates.extend(segs.into_iter().map(|(s, w)| (through(inst, t, s.into_nodes().into_iter().rev()), w)));
        accounts.push(acc);
    }
    check_accounts(&accounts)?;
    if let Some((p, _)) = candidates.iter().find(|(p, _)| &p.cost(inst) > budget) {
        return invariant(format!("closed segment {:?} exceeds the budget", p.nodes()));
    }
    let lp = to_f64(&fam.reward(inst));
    let count = candidates.len();
    let path = pick_best(inst, candidates.into_iter().map(|(p, _)| p)).expect("direct path is a candidate");
    let reward = path.reward(inst);
    Ok(OrienteeringRounding {
        solution: OrienteeringSolution { certificate: certificate(lp, &reward, 6.0), path, reward, lp_value: Some(lp) },
        accounts,
        candidates: count,
    })
}

fn lone_root(inst: &Instance) -> OrienteeringRounding {
    let path = RootedPath::from_vec(vec![inst.root()]);
    let reward = path.reward(inst);
    let lp = to_f64(&reward);
    OrienteeringRounding {
        solution: OrienteeringSolution { certificate: certificate(lp, &reward, 1.0), path, reward, lp_value: Some(lp) },
        accounts: Vec::new(),
        candidates: 1,
    }
}

/// Solves the budgeted relaxation and rounds it.
pub fn solve_rooted_orienteering(inst: &Instance, budget: &Rational) -> Result<OrienteeringRounding> {
    if inst.n() == 1 {
        return Ok(lone_root(inst));
    }
    let pm = build_rooted_orienteering(inst, budget)?;
    let sol = solve_blockwise(&pm)?;
    let fam = extract_preflow_family(&pm, &sol)?;
    let mut out = round_rooted_orienteering(inst, &fam, budget)?;
    out.solution.lp_value = Some(sol.objective);
    Ok(out)
}

/// Solves the regret relaxation and rounds it.
pub fn solve_regret_orienteering(inst: &Instance, regret: &Rational) -> Result<OrienteeringRounding> {
    if inst.n() == 1 {
        return Ok(lone_root(inst));
    }
    let pm = build_regret_orienteering(inst, regret)?;
    let sol = solve_blockwise(&pm)?;
    let fam = extract_preflow_family(&pm, &sol)?;
    let mut out = round_regret_orienteering(inst, &fam, regret)?;
    out.solution.lp_value = Some(sol.objective);
    Ok(out)
}

/// Solves the point-to-point relaxation and rounds it.
pub fn solve_p2p(inst: &Instance, t: Node, budget: &Rational) -> Result<OrienteeringRounding> {
    require_reachable(inst, t, budget)?;
    let pm = build_p2p(inst, t, budget)?;
    let sol = solve_lp(&pm.model);
    let fam = extract_p2p_family(&pm, &sol)?;
    let mut out = round_p2p(inst, &fam, budget)?;
    out.solution.lp_value = Some(sol.objective);
    Ok(out)
}

/// Approximate solver for regret orienteering with a known ratio.
pub trait RegretSolver {
    fn alpha(&self) -> f64;
    fn solve(&self, inst: &Instance, regret: &Rational) -> Result<RootedPath>;
}

/// Solves the regret relaxation and rounds it.
#[derive(Clone, Copy, Debug, Default)]
pub struct LpRegretSolver;

impl RegretSolver for LpRegretSolver {
    fn alpha(&self) -> f64 {
        3.0
    }

    fn solve(&self, inst: &Instance, regret: &Rational) -> Result<RootedPath> {
        if inst.n() == 1 {
            return Ok(RootedPath::from_vec(vec![inst.root()]));
        }
        let pm = build_regret_orienteering(inst, regret)?;
        let fam = extract_preflow_family(&pm, &solve_blockwise(&pm)?)?;
        Ok(round_regret_orienteering(inst, &fam, regret)?.solution.path)
    }
}

/// Point-to-point orienteering through regret orienteering: for each guess
/// `v` of the farthest node in `D_u + c(u, t)` order, solve from `r` and from
/// `t` over the nodes no farther than `v` with regret allowance
/// `B - D_v - c(v, t)`, close both into `r`-`t` paths and keep the best.
pub fn solve_p2p_by_reduction(
    inst: &Instance,
    t: Node,
    budget: &Rational,
    solver: &dyn RegretSolver,
) -> Result<OrienteeringSolution> {
    require_reachable(inst, t, budget)?;
    let r = inst.root();
    let mut best = direct(inst, t);
    let mut guesses: Vec<Node> = inst.nodes().filter(|&v| v != r && v != t).collect();
    guesses.sort_by_key(|&v| (via_key(inst, t, v), v));
    for v in guesses {
        let key = via_key(inst, t, v);
        if &key > budget {
            break;
        }
        let allowance = budget - &key;
        let near: Vec<Node> = inst.nodes().filter(|&u| u != r && u != t && via_key(inst, t, u) <= key).collect();
        let (sub, map) = inst.restrict(&near, r, None)?;
        let p = solver.solve(&sub, &allowance)?;
        let cand = through(inst, t, p.nodes().iter().map(|&u| map[u]));
        if better(inst, &cand, &best) {
            best = cand;
        }
        let (sub, map) = inst.restrict(&near, t, None)?;
        let p = solver.solve(&sub, &allowance)?;
        let cand = through(inst, t, p.nodes().iter().rev().map(|&u| map[u]));
        if better(inst, &cand, &best) {
            best = cand;
        }
    }
    if &best.cost(inst) > budget {
        return invariant("reduction produced a path over budget".to_string());
    }
    let reward = best.reward(inst);
    let bound = 2.0 * solver.alpha();
    Ok(OrienteeringSolution {
        certificate: Certificate { ratio_bound: bound, attained_ratio: f64::NAN },
        path: best,
        reward,
        lp_value: None,
    })
}
