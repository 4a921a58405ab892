mod bench;
mod report;
mod task;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use regroute::model::generators::{euclidean, fixture, gk};
use regroute::model::io::{parse_tsplib, read_instance, write_instance};
use regroute::num::{format_rational, parse_decimal, to_f64};
use regroute::{Error, Instance, Rational, RootedPath};

use crate::bench::Bounds;
use crate::report::{CertificateFile, RunReport, SolutionFile};
use crate::task::{guarantee, Alpha, Kind, Options, Outcome, P2pMode, Task, TspForm};

#[derive(Parser)]
#[command(name = "regroute", version, about = "Orienteering, regret-bounded routing and regret TSP paths by LP rounding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the relaxation and round it.
    Solve(SolveArgs),
    /// Solve exactly by dynamic programming (small instances only).
    Oracle(SolveArgs),
    /// Re-validate a solution file against its instance.
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Write an instance file.
    Gen {
        #[command(subcommand)]
        what: Gen,
    },
    /// Run every problem on a directory of instances, or the gap table.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    #[arg(value_enum)]
    problem: Kind,
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_parser = parse_rational)]
    budget: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    regret: Option<Rational>,
    /// End node id; defaults to the instance's end.
    #[arg(long)]
    end: Option<String>,
    #[arg(long, value_parser = parse_rational, default_value = "1/3")]
    theta: Rational,
    #[arg(long, value_enum, default_value = "lp")]
    p2p_mode: P2pMode,
    /// Regret-orienteering subsolver for the reduction.
    #[arg(long, value_enum, default_value = "oracle")]
    alpha: Alpha,
    #[arg(long, value_enum, default_value = "degree")]
    tsp_mode: TspForm,
    /// Solution file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also run the exact oracle and report against it.
    #[arg(long)]
    with_oracle: bool,
    /// Record stage timings in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Gen {
    /// Ladder instance with `k` rungs.
    Gk {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random points in a square.
    Euclidean {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10.0)]
        side: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// LINE3, STAR3, GK<k> or ROGAP<b>.
    Fixture {
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Convert a TSPLIB file.
    Tsplib {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    dir: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_parser = parse_rational)]
    budget: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    regret: Option<Rational>,
    #[arg(long, value_parser = parse_rational, default_value = "1/3")]
    theta: Rational,
    /// Append the integrality-gap table.
    #[arg(long)]
    gap_suite: bool,
    /// Budget of the orienteering gap instance.
    #[arg(long = "B", default_value_t = 10)]
    gap_budget: usize,
    /// Largest ladder in the gap table.
    #[arg(long, default_value_t = 6)]
    k_max: usize,
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    parse_decimal(s).ok_or_else(|| format!("not a number: {s}"))
}

impl SolveArgs {
    fn options(&self) -> Options {
        Options {
            budget: self.budget.clone(),
            regret: self.regret.clone(),
            end: self.end.clone(),
            theta: self.theta.clone(),
            p2p_mode: self.p2p_mode,
            alpha: self.alpha,
            tsp_mode: self.tsp_mode,
        }
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn labels(inst: &Instance, p: &RootedPath) -> Vec<String> {
    p.nodes().iter().map(|&v| inst.label(v).to_string()).collect()
}

fn solution_file(task: &Task, out: &Outcome) -> SolutionFile {
    SolutionFile {
        instance: task.inst.name().to_string(),
        problem: task.kind.name().to_string(),
        bound: task.bound.as_ref().map(format_rational),
        end: task.end.map(|t| task.inst.label(t).to_string()),
        paths: out.paths.iter().map(|p| labels(&task.inst, p)).collect(),
        objective: format_rational(&out.value),
        lp_value: out.lp,
        certificate: CertificateFile { ratio_bound: out.ratio_bound, attained_ratio: out.attained },
    }
}

fn write_json<T: serde::Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("cannot write {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run_solve(args: &SolveArgs, exact: bool) -> Result<()> {
    let opts = args.options();
    let mut timings = BTreeMap::new();
    let start = Instant::now();
    let inst = read_instance(&args.instance)?;
    timings.insert("read".to_string(), ms(start));
    let task = Task::new(args.problem, inst, &opts)?;
    let start = Instant::now();
    let out = if exact { task.oracle()? } else { task.solve(&opts)? };
    timings.insert(if exact { "oracle" } else { "solve" }.to_string(), ms(start));
    let rep = task.validate(&out.paths)?;
    if let Some(v) = rep.violation {
        bail!(Error::Invariant(format!("produced solution fails validation: {v}")));
    }
    let oracle = if exact {
        Some(to_f64(&out.value))
    } else if args.with_oracle {
        let start = Instant::now();
        let o = task.oracle()?;
        timings.insert("oracle".to_string(), ms(start));
        Some(to_f64(&o.value))
    } else {
        None
    };
    write_json(args.out.as_deref(), &solution_file(&task, &out))?;
    let mut report = RunReport {
        instance: task.inst.name().to_string(),
        command: if exact { "oracle" } else { "solve" }.to_string(),
        problem: task.kind.name().to_string(),
        sense: task.kind.sense(),
        lp_value: out.lp,
        rounded: to_f64(&out.value),
        oracle,
        ratio_bound: (!exact).then(|| guarantee(task.kind, &opts)),
        ratio: None,
        timings_ms: if args.timings { timings } else { BTreeMap::new() },
        seed: None,
    };
    report.refresh();
    eprintln!(
        "{} {}: objective {} lp {} ratio {} bound {}",
        report.instance,
        report.problem,
        format_rational(&out.value),
        fmt(report.lp_value),
        fmt(report.ratio),
        fmt(report.ratio_bound)
    );
    if let Some(p) = &args.report {
        write_json(Some(p), &report)?;
    }
    Ok(())
}

fn fmt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"))
}

fn run_check(instance: &Path, solution: &Path) -> Result<()> {
    let inst = read_instance(instance)?;
    let text = std::fs::read_to_string(solution).with_context(|| format!("cannot read {}", solution.display()))?;
    let sol: SolutionFile = serde_json::from_str(&text)?;
    let kind = Kind::parse(&sol.problem)?;
    let bound = sol.bound.as_deref().map(parse_rational).transpose().map_err(|e| anyhow::anyhow!(e))?;
    let opts = Options { budget: bound.clone(), regret: bound, end: sol.end.clone(), ..Options::default() };
    let task = Task::new(kind, inst, &opts)?;
    let paths = sol
        .paths
        .iter()
        .map(|p| {
            let nodes = p.iter().map(|l| task.inst.node(l)).collect::<regroute::Result<Vec<_>>>()?;
            RootedPath::new(&task.inst, nodes)
        })
        .collect::<regroute::Result<Vec<_>>>()?;
    let rep = task.validate(&paths)?;
    if let Some(v) = rep.violation {
        bail!("solution is infeasible: {v}");
    }
    let value = format_rational(&task.value(&paths));
    if value != sol.objective {
        bail!("objective {} does not match the recomputed {value}", sol.objective);
    }
    println!("ok: {} {} objective {value}", sol.instance, sol.problem);
    Ok(())
}

fn run_gen(what: &Gen) -> Result<()> {
    let (inst, out) = match what {
        Gen::Gk { k, out } => (gk(*k)?, out),
        Gen::Euclidean { n, seed, side, out } => (euclidean(*n, *seed, *side)?, out),
        Gen::Fixture { name, out } => (fixture(name)?, out),
        Gen::Tsplib { input, out } => {
            let text = std::fs::read_to_string(input).with_context(|| format!("cannot read {}", input.display()))?;
            (parse_tsplib(&text)?, out)
        }
    };
    write_instance(out, &inst)?;
    Ok(())
}

fn run_bench(args: &BenchArgs) -> Result<()> {
    if args.dir.is_none() && !args.gap_suite {
        bail!(Error::InvalidArgument("bench needs --dir or --gap-suite".into()));
    }
    let mut rows = Vec::new();
    if let Some(dir) = &args.dir {
        let bounds = Bounds { budget: args.budget.clone(), regret: args.regret.clone() };
        let opts = Options { theta: args.theta.clone(), ..Options::default() };
        rows.extend(bench::directory_rows(dir, &bounds, &opts, args.jobs)?);
    }
    if args.gap_suite {
        rows.extend(bench::gap_rows(args.gap_budget, args.k_max)?);
    }
    bench::write_csv(&args.out, &rows)?;
    let failed = rows.iter().filter(|r| !r.note.is_empty() && !r.note.starts_with("gap")).count();
    eprintln!("{} rows written to {}, {failed} with notes", rows.len(), args.out.display());
    Ok(())
}

/// 2 for infeasible input, 3 for size guards, 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Infeasible(_)) => 2,
        Some(Error::SizeGuard { .. }) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let res = match &cli.command {
        Command::Solve(a) => run_solve(a, false),
        Command::Oracle(a) => run_solve(a, true),
        Command::Check { instance, solution } => run_check(instance, solution),
        Command::Gen { what } => run_gen(what),
        Command::Bench(a) => run_bench(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
