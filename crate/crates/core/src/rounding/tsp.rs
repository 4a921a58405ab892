use num_traits::{One, Zero};

use crate::error::{invariant, Error, Result};
use crate::formulations::{build_regret_tsp_path, extract_tsp_flow, TspMode, TspPathFlow};
use crate::graph::{connectivity, pack_arborescences, tree_to_path, verify_packing, TreeWalk};
use crate::lp::solve_lp;
use crate::model::{Certificate, Instance, Node, RootedPath, TspPathSolution};
use crate::num::{int, to_f64, Rational};

#[derive(Clone, Debug)]
pub struct TspRounding {
    pub solution: TspPathSolution,
    /// `c(x) - D_t` of the rounded flow; twice this bounds the result.
    pub flow_excess: Rational,
    pub trees: usize,
}

/// Packs the flow into spanning trees, walks each to a Hamiltonian path
/// ending at the end node, and keeps the path of least regret.
pub fn round_regret_tsp_path(inst: &Instance, flow: &TspPathFlow) -> Result<TspRounding> {
    let (r, t) = (flow.root, flow.end);
    let n = inst.n();
    for v in inst.nodes().filter(|&v| v != r) {
        if connectivity(&flow.x, r, v)? < Rational::one() {
            return Err(Error::Numerical(format!("node {v} has connectivity below one")));
        }
    }
    let fam = pack_arborescences(&flow.x, r, &Rational::one())?;
    verify_packing(&flow.x, r, &Rational::one(), &fam)?;
    let mut best: Option<(Rational, RootedPath)> = None;
    for (tree, _) in &fam.trees {
        if tree.nodes().len() != n {
            return invariant("packed tree does not span every node".to_string());
        }
        let path = RootedPath::new(inst, tree_to_path(&tree.arcs, TreeWalk::EndAt { root: r, v: t })?)?;
        let reg = path.regret(inst);
        if reg > int(2) * (tree.cost(inst) - inst.dist(t)) {
            return invariant("tree walk exceeds twice the tree's excess".to_string());
        }
        if best.as_ref().is_none_or(|(b, p)| reg < *b || (&reg == b && path.nodes() < p.nodes())) {
            best = Some((reg, path));
        }
    }
    let (regret, path) = best.ok_or_else(|| Error::Invariant("empty packing".into()))?;
    let flow_excess = flow.x.cost(|a, b| inst.cost(a, b).clone()) - inst.dist(t);
    if regret > int(2) * &flow_excess {
        return invariant(format!("regret {regret} exceeds twice the flow excess {flow_excess}"));
    }
    let lp = to_f64(&flow_excess);
    let attained = if lp > 0.0 { to_f64(&regret) / lp } else if regret.is_zero() { 1.0 } else { f64::INFINITY };
    Ok(TspRounding {
        solution: TspPathSolution { path, regret, lp_value: Some(lp), certificate: Certificate { ratio_bound: 2.0, attained_ratio: attained } },
        flow_excess,
        trees: fam.trees.len(),
    })
}

/// Solves the chosen relaxation and rounds it.
pub fn solve_regret_tsp_path(inst: &Instance, t: Node, mode: TspMode) -> Result<TspRounding> {
    let tm = build_regret_tsp_path(inst, t, mode)?;
    let sol = solve_lp(&tm.model);
    let flow = extract_tsp_flow(&tm, &sol)?;
    let mut out = round_regret_tsp_path(inst, &flow)?;
    out.solution.lp_value = Some(sol.objective);
    Ok(out)
}
