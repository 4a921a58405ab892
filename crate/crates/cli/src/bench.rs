use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;
use regroute::formulations::{build_rooted_orienteering, build_weak_ro_variant, WeakVariant};
use regroute::lp::{solve_lp, LpStatus};
use regroute::model::generators::{gk, ro_gap};
use regroute::model::io::read_instance;
use regroute::num::{frac, int, to_f64};
use regroute::oracles::{exact_orienteering, exact_regret_tsp_path, Bound, Mode};
use regroute::rounding::solve_regret_tsp_path;
use regroute::formulations::TspMode;
use regroute::{Error, Instance, Node, Rational};
use serde::Serialize;

use crate::report::ratio;
use crate::task::{guarantee, Kind, Options, Task};

#[derive(Clone, Debug, Default, Serialize)]
pub struct Row {
    pub instance: String,
    pub problem: String,
    pub lp: Option<f64>,
    pub rounded: Option<f64>,
    pub oracle: Option<f64>,
    pub ratio: Option<f64>,
    pub bound: Option<f64>,
    pub time_ms: Option<f64>,
    pub note: String,
}

impl Row {
    fn failed(instance: &str, problem: &str, err: impl std::fmt::Display) -> Row {
        Row { instance: instance.into(), problem: problem.into(), note: format!("error: {err}"), ..Row::default() }
    }
}

/// Bounds used for every instance of a directory run. Missing values are
/// taken relative to the farthest node.
#[derive(Clone, Debug, Default)]
pub struct Bounds {
    pub budget: Option<Rational>,
    pub regret: Option<Rational>,
}

/// The instance's end node, else the farthest node from the root.
fn default_end(inst: &Instance) -> Option<Node> {
    inst.end().or_else(|| inst.nodes().filter(|&v| v != inst.root()).max_by(|&a, &b| inst.dist(a).cmp(inst.dist(b)).then(b.cmp(&a))))
}

fn run_task(name: &str, kind: Kind, inst: &Instance, opts: &Options) -> Row {
    let task = match Task::new(kind, inst.clone(), opts) {
        Ok(t) => t,
        Err(e) => return Row::failed(name, kind.name(), e),
    };
    let start = Instant::now();
    let out = match task.solve(opts) {
        Ok(o) => o,
        Err(e) => return Row::failed(name, kind.name(), e),
    };
    let time_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut note = String::new();
    match task.validate(&out.paths) {
        Ok(rep) if rep.passed() => {}
        Ok(rep) => note = format!("invalid: {}", rep.violation.unwrap_or_default()),
        Err(e) => note = format!("invalid: {e}"),
    }
    let oracle = match task.oracle() {
        Ok(o) => Some(to_f64(&o.value)),
        Err(Error::SizeGuard { .. }) => None,
        Err(e) => {
            note = format!("oracle: {e}");
            None
        }
    };
    let rounded = to_f64(&out.value);
    Row {
        instance: name.into(),
        problem: kind.name().into(),
        lp: out.lp,
        rounded: Some(rounded),
        oracle,
        ratio: ratio(kind.sense(), out.lp, rounded, oracle),
        bound: Some(guarantee(kind, opts)),
        time_ms: Some(time_ms),
        note,
    }
}

fn instance_rows(path: &Path, bounds: &Bounds, opts: &Options) -> Vec<Row> {
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let inst = match read_instance(path) {
        Ok(i) => i,
        Err(e) => return vec![Row::failed(&name, "-", e)],
    };
    let reach = inst.max_dist();
    let budget = bounds.budget.clone().unwrap_or_else(|| reach.clone());
    let regret = bounds.regret.clone().unwrap_or_else(|| &reach * frac(1, 2));
    let mut opts = opts.clone();
    opts.budget = Some(budget.clone());
    opts.regret = Some(regret);
    let mut rows = Vec::new();
    for kind in [Kind::RootedOrienteering, Kind::RegretOrienteering, Kind::RvrpR1, Kind::RvrpR2] {
        rows.push(run_task(&name, kind, &inst, &opts));
    }
    if let Some(t) = default_end(&inst) {
        opts.end = Some(inst.label(t).to_string());
        opts.budget = Some(inst.dist(t) + &budget);
        rows.push(run_task(&name, Kind::P2pOrienteering, &inst, &opts));
        rows.push(run_task(&name, Kind::RegretTspPath, &inst, &opts));
    }
    rows
}

/// Every `*.json` instance under `dir`, in name order.
pub fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn directory_rows(dir: &Path, bounds: &Bounds, opts: &Options, jobs: usize) -> Result<Vec<Row>> {
    let files = instance_files(dir)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let per: Vec<Vec<Row>> = pool.install(|| files.par_iter().map(|f| instance_rows(f, bounds, opts)).collect());
    Ok(per.into_iter().flatten().collect())
}

fn lp_value(model: &regroute::lp::LpModel) -> Result<f64> {
    let sol = solve_lp(model);
    anyhow::ensure!(sol.status == LpStatus::Optimal, "gap LP ended {:?}", sol.status);
    Ok(sol.objective)
}

/// Integrality-gap table: the orienteering gap instance with budget `b`
/// under the weakened and full relaxations, and the ladder instances under
/// the degree-constrained path relaxation.
pub fn gap_rows(b: usize, k_max: usize) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let inst = ro_gap(b)?;
    let name = inst.name().to_string();
    let budget = int(b as i64);
    let ip = to_f64(&exact_orienteering(&inst, &Bound::Budget(budget.clone()), Mode::Rooted)?.value);
    let weak = b as f64 / 2.0 + 1.0;
    for v in [WeakVariant::SingleFlow, WeakVariant::NoDepth, WeakVariant::SharedBudget] {
        let start = Instant::now();
        let lp = lp_value(build_weak_ro_variant(&inst, &budget, v)?.model())?;
        rows.push(Row {
            instance: name.clone(),
            problem: format!("ro-{}", v.name()),
            lp: Some(lp),
            oracle: Some(ip),
            ratio: Some(lp / ip),
            bound: Some(weak / ip),
            time_ms: Some(start.elapsed().as_secs_f64() * 1e3),
            note: "gap at least bound".into(),
            ..Row::default()
        });
    }
    let start = Instant::now();
    let lp = lp_value(&build_rooted_orienteering(&inst, &budget)?.model)?;
    rows.push(Row {
        instance: name,
        problem: "ro-full".into(),
        lp: Some(lp),
        oracle: Some(ip),
        ratio: Some(lp / ip),
        bound: Some(3.0),
        time_ms: Some(start.elapsed().as_secs_f64() * 1e3),
        note: "gap at most bound".into(),
        ..Row::default()
    });
    for k in 2..=k_max {
        let inst = gk(k)?;
        let t = inst.n() - 1;
        let start = Instant::now();
        let out = solve_regret_tsp_path(&inst, t, TspMode::Degree)?;
        let time_ms = start.elapsed().as_secs_f64() * 1e3;
        let lp = out.solution.lp_value.unwrap_or(f64::NAN);
        let opt = to_f64(&exact_regret_tsp_path(&inst, t)?.value);
        let kf = k as f64;
        rows.push(Row {
            instance: inst.name().to_string(),
            problem: "tsp-degree".into(),
            lp: Some(lp),
            rounded: Some(to_f64(&out.solution.regret)),
            oracle: Some(opt),
            ratio: Some(opt / lp),
            bound: Some((2.0 * kf - 1.0) / kf),
            time_ms: Some(time_ms),
            note: "gap at least bound".into(),
        });
    }
    Ok(rows)
}

pub fn write_csv(path: &Path, rows: &[Row]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
