use num_traits::{Signed, Zero};

use super::sentinel::{paths_to_sentinel_structure, round_sentinel_structure, PipelineTrace};
use super::split::split_by_regret;
use crate::error::{invariant, Error, Result};
use crate::formulations::{
    build_rvrp_r1, build_rvrp_r2, extract_preflow_family, extract_sentinel_structure, PreflowFamily, PreflowMode,
    SentinelStructure,
};
use crate::graph::{pack_arborescences, tree_to_path, verify_packing, TreeWalk};
use crate::lp::{solve_lp, LpStatus};
use crate::model::{merge_zero_distance, Certificate, Instance, MergeMap, RootedPath, RvrpSolution};
use crate::num::{to_f64, Rational};

#[derive(Clone, Debug)]
pub struct RvrpRounding {
    pub solution: RvrpSolution,
    pub trace: PipelineTrace,
    /// The structure that was rounded.
    pub structure: SentinelStructure,
}

fn check_regret(regret: &Rational) -> Result<()> {
    if regret.is_negative() {
        return Err(Error::InvalidArgument("regret bound must be nonnegative".into()));
    }
    Ok(())
}

fn finish(
    inst: &Instance,
    paths: Vec<RootedPath>,
    trace: PipelineTrace,
    structure: SentinelStructure,
    regret: &Rational,
    lp: f64,
    ratio_bound: f64,
) -> Result<RvrpRounding> {
    if let Some(p) = paths.iter().find(|p| &p.regret(inst) > regret) {
        return invariant(format!("path {:?} exceeds the regret bound", p.nodes()));
    }
    let attained = if lp > 0.0 { paths.len() as f64 / lp } else { 1.0 };
    let solution = RvrpSolution {
        paths,
        regret: regret.clone(),
        lp_value: Some(lp),
        certificate: Certificate { ratio_bound, attained_ratio: attained },
    };
    Ok(RvrpRounding { solution, trace, structure })
}

/// Rounds a covering block family: each block is packed into trees, every
/// tree becomes a path to the block node, and the resulting fractional path
/// cover goes through the sentinel pipeline. Clients must be at positive
/// distance from the root.
pub fn round_rvrp_r1(inst: &Instance, fam: &PreflowFamily, regret: &Rational, theta: &Rational) -> Result<RvrpRounding> {
    check_regret(regret)?;
    if fam.mode != PreflowMode::Cover {
        return Err(Error::InvalidArgument("family does not come from the covering relaxation".into()));
    }
    let r = inst.root();
    let mut cover = Vec::new();
    for b in &fam.blocks {
        let trees = pack_arborescences(&b.x, r, &b.zvv)?;
        verify_packing(&b.x, r, &b.zvv, &trees)?;
        for (tree, gamma) in &trees.trees {
            let nodes = tree_to_path(&tree.arcs, TreeWalk::EndAt { root: r, v: b.v })?;
            cover.push((RootedPath::new(inst, nodes)?, gamma.clone()));
        }
    }
    if regret.is_zero() {
        // keeps the structure's regret budget at zero
        cover = split_by_regret(inst, &cover, regret)?;
    }
    let lp = to_f64(&fam.total_weight());
    let st = paths_to_sentinel_structure(inst, &cover)?;
    let (paths, trace) = round_sentinel_structure(inst, &st, regret, theta)?;
    let factor = 2.0 * (6.0 / (1.0 - to_f64(theta)) + 1.0 / to_f64(theta)) + 1.0 / to_f64(theta);
    finish(inst, paths, trace, st, regret, lp, factor)
}

/// Rounds an extracted interval-relaxation structure.
pub fn round_rvrp_r2(inst: &Instance, st: &SentinelStructure, regret: &Rational, theta: &Rational) -> Result<RvrpRounding> {
    check_regret(regret)?;
    let lp = to_f64(&st.k);
    let (paths, trace) = round_sentinel_structure(inst, st, regret, theta)?;
    let factor = 6.0 / (1.0 - to_f64(theta)) + 2.0 / to_f64(theta);
    finish(inst, paths, trace, st.clone(), regret, lp, factor)
}

/// Which relaxation drives vehicle-routing rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RvrpRelaxation {
    Blocks,
    Intervals,
}

/// End-to-end vehicle routing: merge zero-distance nodes, solve the chosen
/// relaxation, round, and expand merged nodes again.
pub fn solve_rvrp(inst: &Instance, regret: &Rational, theta: &Rational, which: RvrpRelaxation) -> Result<RvrpRounding> {
    check_regret(regret)?;
    let (merged, map) = merge_zero_distance(inst)?;
    let mut out = if merged.n() == 1 {
        trivial(&merged, regret, theta)?
    } else {
        match which {
            RvrpRelaxation::Blocks => {
                let pm = build_rvrp_r1(&merged, regret)?;
                let sol = solve_lp(&pm.model);
                let fam = extract_preflow_family(&pm, &sol)?;
                let mut out = round_rvrp_r1(&merged, &fam, regret, theta)?;
                out.solution.lp_value = Some(sol.objective);
                out
            }
            RvrpRelaxation::Intervals => {
                let rm = build_rvrp_r2(&merged, regret)?;
                let sol = solve_lp(&rm.model);
                if sol.status != LpStatus::Optimal {
                    return Err(Error::Numerical(format!("interval relaxation ended {:?}", sol.status)));
                }
                let st = extract_sentinel_structure(&merged, &rm, &sol)?;
                let mut out = round_rvrp_r2(&merged, &st, regret, theta)?;
                out.solution.lp_value = Some(sol.objective);
                out
            }
        }
    };
    out.solution.paths = lift_paths(&map, &out.solution.paths);
    Ok(out)
}

fn trivial(inst: &Instance, regret: &Rational, theta: &Rational) -> Result<RvrpRounding> {
    let st = paths_to_sentinel_structure(inst, &[])?;
    let (paths, trace) = round_sentinel_structure(inst, &st, regret, theta)?;
    finish(inst, paths, trace, st, regret, 0.0, 1.0)
}

/// Expands merged nodes; nodes merged into the root ride on the first path,
/// or on a path of their own when there is none.
pub fn lift_paths(map: &MergeMap, paths: &[RootedPath]) -> Vec<RootedPath> {
    let root_extra = map.groups[0].len() > 1;
    let mut out: Vec<RootedPath> = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        let lifted = map.lift(p);
        if i == 0 || !root_extra {
            out.push(lifted);
        } else {
            let extra = &map.groups[0][1..];
            out.push(RootedPath::from_vec(lifted.nodes().iter().copied().filter(|v| !extra.contains(v)).collect()));
        }
    }
    if out.is_empty() && root_extra {
        out.push(map.lift(&RootedPath::from_vec(vec![0])));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::generators::{line3, star3};
    use crate::model::{validate_solution, Problem};
    use crate::num::{frac, int};

    fn check(inst: &Instance, r: i64, which: RvrpRelaxation) -> RvrpRounding {
        let out = solve_rvrp(inst, &int(r), &frac(1, 3), which).unwrap();
        let raw: Vec<Vec<usize>> = out.solution.paths.iter().map(|p| p.nodes().to_vec()).collect();
        let rep = validate_solution(inst, &Problem::Rvrp { regret: int(r) }, &raw).unwrap();
        assert!(rep.passed(), "{:?}", rep.violation);
        out
    }

    #[test]
    fn star_with_zero_regret_needs_three() {
        let out = check(&star3(), 0, RvrpRelaxation::Blocks);
        assert_eq!(out.solution.paths.len(), 3);
        let out = check(&star3(), 0, RvrpRelaxation::Intervals);
        assert!(out.solution.paths.len() <= 45);
    }

    #[test]
    fn line_with_zero_regret_needs_one() {
        let out = check(&line3(), 0, RvrpRelaxation::Blocks);
        assert_eq!(out.solution.paths.len(), 1);
    }

    #[test]
    fn star_with_regret_two() {
        for which in [RvrpRelaxation::Blocks, RvrpRelaxation::Intervals] {
            let out = check(&star3(), 2, which);
            assert!(out.solution.paths.len() as f64 <= out.trace.count_bound);
        }
    }

    #[test]
    fn single_client_gives_one_path() {
        let cost = vec![vec![int(0), int(3)], vec![int(3), int(0)]];
        let inst = Instance::new("one", vec!["r".into(), "a".into()], 0, None, cost, vec![int(0), int(1)]).unwrap();
        let out = check(&inst, 1, RvrpRelaxation::Intervals);
        assert_eq!(out.solution.paths.len(), 1);
    }

    #[test]
    fn nodes_at_the_root_are_visited() {
        let cost = vec![
            vec![int(0), int(0), int(2)],
            vec![int(0), int(0), int(2)],
            vec![int(2), int(2), int(0)],
        ];
        let inst = Instance::new("z", vec!["r".into(), "a".into(), "b".into()], 0, None, cost, vec![int(0); 3]).unwrap();
        check(&inst, 0, RvrpRelaxation::Intervals);
        check(&inst, 0, RvrpRelaxation::Blocks);
    }
}
