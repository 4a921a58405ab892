//! End-to-end guarantees on fixtures and seeded random suites. Prints one
//! line per criterion and exits nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regroute::formulations::{
    build_regret_tsp_path, build_rooted_orienteering, build_weak_ro_variant, TspMode, WeakModel, WeakVariant,
};
use regroute::lp::{check_feasibility, solve_lp, LpStatus};
use regroute::model::generators::{euclidean, gk, gk_point, line3, ro_gap, ro_gap_point, star3};
use regroute::num::{frac, int, to_f64};
use regroute::oracles::{exact_orienteering, exact_regret_tsp_path, exact_rvrp, Bound, Mode, OracleRegretSolver};
use regroute::rounding::{
    classify_red_blue, solve_p2p, solve_p2p_by_reduction, solve_regret_orienteering, solve_regret_tsp_path,
    solve_rooted_orienteering, solve_rvrp, split_path, LpRegretSolver, RvrpRelaxation,
};
use regroute::graph::ArcVector;
use regroute::{Instance, Node, Rational, RootedPath};

const TOL: f64 = 1e-6;

#[derive(Default)]
struct Check {
    runs: usize,
    fails: Vec<String>,
}

impl Check {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.runs += 1;
        if !ok {
            self.fails.push(what());
        }
    }
}

fn f(r: &Rational) -> f64 {
    to_f64(r)
}

fn ceil(x: f64) -> f64 {
    (x - 1e-9).ceil()
}

/// Clients `2..=max_clients` cycling with the seed.
fn suite(count: u64, max_clients: usize) -> Vec<Instance> {
    (0..count).map(|s| euclidean(2 + (s as usize) % (max_clients - 1), 1000 + s, 10.0).unwrap()).collect()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn quarters(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    frac(rng.gen_range(lo..=hi), 4)
}

fn rooted_budget_suite() -> Vec<(Instance, Rational)> {
    let mut out = vec![(line3(), int(2)), (star3(), int(3))];
    for (i, inst) in suite(100, 9).into_iter().enumerate() {
        let b = inst.max_dist() * quarters(&mut rng(i as u64), 2, 12);
        out.push((inst, b));
    }
    out
}

fn c1(ck: &mut Check) {
    let cases = rooted_budget_suite();
    let start = Instant::now();
    let solved: Vec<_> = cases.iter().map(|(inst, b)| solve_rooted_orienteering(inst, b).unwrap()).collect();
    let secs = start.elapsed().as_secs_f64();
    ck.expect(secs <= 10.0, || format!("suite took {secs:.1}s"));
    for ((inst, b), out) in cases.into_iter().zip(solved) {
        let lp = out.solution.lp_value.unwrap();
        let opt = exact_orienteering(&inst, &Bound::Budget(b.clone()), Mode::Rooted).unwrap().value;
        let got = &out.solution.reward;
        ck.expect(f(got) >= lp / 3.0 - TOL, || format!("{}: reward {got} below LP {lp}/3", inst.name()));
        ck.expect(out.solution.path.cost(&inst) <= b, || format!("{}: cost over budget", inst.name()));
        ck.expect(lp >= f(&opt) - TOL, || format!("{}: LP {lp} below optimum {opt}", inst.name()));
    }
}

fn c2(ck: &mut Check) {
    let mut cases = vec![(line3(), int(0)), (star3(), int(2))];
    for (i, inst) in suite(100, 9).into_iter().enumerate() {
        let r = inst.max_dist() * quarters(&mut rng(500 + i as u64), 0, 8);
        cases.push((inst, r));
    }
    for (inst, r) in cases {
        let out = solve_regret_orienteering(&inst, &r).unwrap();
        let lp = out.solution.lp_value.unwrap();
        let opt = exact_orienteering(&inst, &Bound::Regret(r.clone()), Mode::Rooted).unwrap().value;
        let got = &out.solution.reward;
        ck.expect(f(got) >= lp / 3.0 - TOL, || format!("{}: reward {got} below LP {lp}/3", inst.name()));
        ck.expect(out.solution.path.regret(&inst) <= r, || format!("{}: regret over bound", inst.name()));
        ck.expect(lp >= f(&opt) - TOL, || format!("{}: LP {lp} below optimum {opt}", inst.name()));
    }
}

/// Random end node with zero reward at both ends, budget at least the
/// direct cost.
fn p2p_suite() -> Vec<(Instance, Node, Rational)> {
    let mut out = vec![(line3().with_rewards(vec![int(0), int(1), int(0)]).unwrap(), 2, int(2))];
    for (i, inst) in suite(100, 8).into_iter().enumerate() {
        let mut g = rng(900 + i as u64);
        let t = g.gen_range(1..inst.n());
        let mut reward = inst.rewards().to_vec();
        reward[t] = int(0);
        let inst = inst.with_rewards(reward).unwrap();
        let b = inst.dist(t) + inst.max_dist() * quarters(&mut g, 0, 8);
        out.push((inst, t, b));
    }
    out
}

fn c3(ck: &mut Check) {
    for (inst, t, b) in p2p_suite() {
        let opt = f(&exact_orienteering(&inst, &Bound::Budget(b.clone()), Mode::P2p(t)).unwrap().value);
        for (solver, alpha) in [(&OracleRegretSolver as &dyn regroute::rounding::RegretSolver, 1.0), (&LpRegretSolver, 3.0)] {
            let sol = solve_p2p_by_reduction(&inst, t, &b, solver).unwrap();
            let got = f(&sol.reward);
            ck.expect(got >= opt / (2.0 * alpha) - TOL, || format!("{}: alpha {alpha} reward {got} vs optimum {opt}", inst.name()));
            ck.expect(sol.path.cost(&inst) <= b && sol.path.end() == t, || format!("{}: infeasible path", inst.name()));
        }
    }
}

fn c4(ck: &mut Check) {
    for (inst, t, b) in p2p_suite() {
        let out = solve_p2p(&inst, t, &b).unwrap();
        let lp = out.solution.lp_value.unwrap();
        let got = f(&out.solution.reward);
        ck.expect(got >= lp / 6.0 - TOL, || format!("{}: reward {got} below LP {lp}/6", inst.name()));
        ck.expect(out.solution.path.cost(&inst) <= b && out.solution.path.end() == t, || format!("{}: infeasible path", inst.name()));
    }
}

fn routing_suite() -> Vec<(Instance, Rational)> {
    let mut out = vec![(star3(), int(0)), (star3(), int(2)), (line3(), int(0))];
    for (i, inst) in suite(50, 7).into_iter().enumerate() {
        let r = inst.max_dist() * quarters(&mut rng(1300 + i as u64), 0, 6);
        out.push((inst, r));
    }
    out
}

fn routing(ck: &mut Check, which: RvrpRelaxation, lp_factor: f64, opt_factor: f64) {
    let theta = frac(1, 3);
    for (inst, r) in routing_suite() {
        let out = solve_rvrp(&inst, &r, &theta, which).unwrap();
        let lp = out.solution.lp_value.unwrap();
        let opt = f(&exact_rvrp(&inst, &r).unwrap().value);
        let count = out.solution.paths.len() as f64;
        let name = inst.name().to_string();
        ck.expect(count <= lp_factor * lp + ceil(3.0 * lp) + TOL, || format!("{name}: {count} paths against LP {lp}"));
        ck.expect(count <= opt_factor * opt, || format!("{name}: {count} paths against optimum {opt}"));
        for v in inst.nodes() {
            ck.expect(out.solution.paths.iter().any(|p| p.contains(v)), || format!("{name}: node {v} uncovered"));
        }
        for p in &out.solution.paths {
            ck.expect(f(&(p.regret(&inst) - &r)) <= 1e-9, || format!("{name}: path {:?} over regret", p.nodes()));
        }
        if which == RvrpRelaxation::Intervals {
            ck.expect(ceil(lp) <= opt, || format!("{name}: rounded-up LP {lp} above optimum {opt}"));
            let tr = &out.trace;
            ck.expect(tr.forest_cost <= tr.forest_cap, || format!("{name}: forest too expensive"));
            ck.expect(tr.component_flow.iter().all(|c| c >= &theta), || format!("{name}: component flow below theta"));
            for (seq, _) in &tr.contracted {
                let mut seen = seq.clone();
                seen.sort();
                seen.dedup();
                ck.expect(seen.len() == seq.len(), || format!("{name}: path meets a component twice"));
                let inc = seq.windows(2).all(|w| inst.dist(tr.witnesses[w[0]]) < inst.dist(tr.witnesses[w[1]]));
                ck.expect(inc, || format!("{name}: contracted path not distance-increasing"));
            }
        }
    }
}

fn c5(ck: &mut Check) {
    routing(ck, RvrpRelaxation::Blocks, 24.0, 27.0);
}

fn c6(ck: &mut Check) {
    routing(ck, RvrpRelaxation::Intervals, 12.0, 15.0);
}

fn c7(ck: &mut Check) {
    for k in 2..=6 {
        let start = Instant::now();
        let inst = gk(k).unwrap();
        let t = inst.n() - 1;
        let kf = k as f64;
        let tm = build_regret_tsp_path(&inst, t, TspMode::Degree).unwrap();
        let point = tm.lift_point(&ArcVector::from_pairs(gk_point(k))).unwrap();
        let rep = check_feasibility(&tm.model, &point);
        ck.expect(rep.feasible && rep.objective == int(k as i64), || format!("GK{k}: explicit point {rep:?}"));
        let out = solve_regret_tsp_path(&inst, t, TspMode::Degree).unwrap();
        let lp = out.solution.lp_value.unwrap();
        ck.expect(lp <= kf + TOL, || format!("GK{k}: LP {lp} above {k}"));
        let opt = f(&exact_regret_tsp_path(&inst, t).unwrap().value);
        ck.expect(opt >= 2.0 * kf - 1.0, || format!("GK{k}: optimum {opt} below 2k-1 = {}", 2 * k - 1));
        ck.expect(opt / lp >= (2.0 * kf - 1.0) / kf - TOL, || format!("GK{k}: observed gap {:.4} below (2k-1)/k", opt / lp));
        let got = f(&out.solution.regret);
        ck.expect(got <= 2.0 * lp + TOL, || format!("GK{k}: rounded regret {got} above 2 LP"));
        let secs = start.elapsed().as_secs_f64();
        ck.expect(secs <= 30.0, || format!("GK{k}: took {secs:.1}s"));
    }
}

fn c8(ck: &mut Check) {
    let b = 10usize;
    let inst = ro_gap(b).unwrap();
    let budget = int(b as i64);
    let ip = exact_orienteering(&inst, &Bound::Budget(budget.clone()), Mode::Rooted).unwrap().value;
    ck.expect(ip == int(2), || format!("IP is {ip}"));
    let value = |v: WeakVariant| {
        let m = build_weak_ro_variant(&inst, &budget, v).unwrap();
        let sol = solve_lp(m.model());
        assert_eq!(sol.status, LpStatus::Optimal);
        (m, sol.objective)
    };
    let (single, lp) = value(WeakVariant::SingleFlow);
    ck.expect(lp >= 6.0 - TOL, || format!("single-flow LP {lp} below 6"));
    if let WeakModel::Single(sm) = &single {
        let point = sm.lift_point(&ArcVector::from_pairs(ro_gap_point(b))).unwrap();
        let rep = check_feasibility(&sm.model, &point);
        ck.expect(rep.feasible && rep.objective == int(6), || format!("gap point {rep:?}"));
    }
    for v in [WeakVariant::NoDepth, WeakVariant::SharedBudget] {
        let (_, lp) = value(v);
        ck.expect(lp >= 6.0 - TOL, || format!("{} LP {lp} below 6", v.name()));
    }
    let full = solve_lp(&build_rooted_orienteering(&inst, &budget).unwrap().model).objective;
    ck.expect(full <= 3.0 * f(&ip) + TOL, || format!("full LP {full} above 3 IP"));
}

fn c9(ck: &mut Check) {
    let mut runner = TestRunner::new_with_rng(Config::default(), proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha));
    let strategy = common::preflow();
    for i in 0..1000 {
        let (n, x) = strategy.new_tree(&mut runner).unwrap().current();
        let k = frac(1 + (i % 5), 1 + (i % 3));
        let bad = common::packing_violation(n, &x, &k);
        ck.expect(bad.is_none(), || format!("preflow {i}: {}", bad.unwrap()));
    }
}

fn random_path(g: &mut ChaCha8Rng, inst: &Instance) -> RootedPath {
    let mut rest: Vec<Node> = (1..inst.n()).collect();
    let len = g.gen_range(0..=rest.len());
    let mut nodes = vec![0];
    for _ in 0..len {
        nodes.push(rest.swap_remove(g.gen_range(0..rest.len())));
    }
    RootedPath::new(inst, nodes).unwrap()
}

/// Edge `i` is red when a node at or before `i` is no closer to the root
/// than a node after it.
fn red_cost(inst: &Instance, p: &RootedPath) -> Rational {
    let v = p.nodes();
    let mut total = int(0);
    for i in 0..v.len().saturating_sub(1) {
        let red = (0..=i).any(|a| (i + 1..v.len()).any(|b| inst.dist(v[b]) <= inst.dist(v[a])));
        if red {
            total += inst.cost(v[i], v[i + 1]);
        }
    }
    total
}

fn c10(ck: &mut Check) {
    let mut g = rng(77);
    let instances: Vec<Instance> = (0..50).map(|s| euclidean(1 + (s as usize) % 9, 3000 + s, 10.0).unwrap()).collect();
    for i in 0..10000 {
        let inst = &instances[i % instances.len()];
        let p = random_path(&mut g, inst);
        let regret = p.regret(inst);
        let bound = inst.max_dist() * quarters(&mut g, 1, 8);
        let segs = split_path(inst, &p, &bound);
        let alpha = f(&regret) / f(&bound);
        ck.expect(segs.len() as f64 <= 1.0 + alpha + 1e-9, || format!("path {:?}: {} segments, alpha {alpha}", p.nodes(), segs.len()));
        ck.expect(segs.iter().all(|s| s.regret(inst) <= bound), || format!("path {:?}: segment over bound", p.nodes()));
        let covered: Vec<Node> = segs.iter().flat_map(|s| s.nodes()[1..].to_vec()).collect();
        ck.expect(covered == p.nodes()[1..], || format!("path {:?}: segments reorder nodes", p.nodes()));
        match classify_red_blue(inst, &p) {
            Ok(dec) => {
                let red = red_cost(inst, &p);
                ck.expect(dec.red_cost == red, || format!("path {:?}: red cost {} vs {red}", p.nodes(), dec.red_cost));
                ck.expect(red <= frac(3, 2) * &regret, || format!("path {:?}: red cost {red} above 1.5 regret", p.nodes()));
                let mut seq = vec![inst.root()];
                seq.extend(dec.sentinels());
                let inc = seq.windows(2).all(|w| inst.dist(w[0]) < inst.dist(w[1]));
                ck.expect(inc, || format!("path {:?}: sentinels {seq:?} not increasing", p.nodes()));
            }
            Err(e) => ck.expect(false, || format!("path {:?}: {e}", p.nodes())),
        }
    }
}

fn main() {
    let criteria: [(&str, fn(&mut Check)); 10] = [
        ("rooted orienteering within a third of the LP", c1),
        ("regret orienteering within a third of the LP", c2),
        ("point-to-point reduction within 2 alpha of optimum", c3),
        ("point-to-point rounding within a sixth of the LP", c4),
        ("block relaxation routing count", c5),
        ("interval relaxation routing count and pipeline checks", c6),
        ("ladder family gap and TSP path rounding", c7),
        ("orienteering gap instance", c8),
        ("arborescence packing on random preflows", c9),
        ("splitting and red edges on random paths", c10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut ck = Check::default();
        let res = catch_unwind(AssertUnwindSafe(|| run(&mut ck)));
        let secs = start.elapsed().as_secs_f64();
        let pass = res.is_ok() && ck.fails.is_empty();
        if !pass {
            failed += 1;
        }
        let status = if pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} [{secs:.2}s, {} checks] {name}", i + 1, ck.runs);
        if res.is_err() {
            println!("    aborted by panic");
        }
        for msg in ck.fails.iter().take(8) {
            println!("    {msg}");
        }
        if ck.fails.len() > 8 {
            println!("    ... {} more", ck.fails.len() - 8);
        }
    }
    println!("{} of 10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
