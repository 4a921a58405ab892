use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regroute")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_str().map_or_else(|| v.as_f64().unwrap(), |s| s.parse().unwrap())
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Dir {
        Dir(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn s(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }

    fn fixture(&self, name: &str) -> String {
        let file = self.s(&format!("{name}.json"));
        ok(&["gen", "fixture", name, "--out", &file]);
        file
    }
}

#[test]
fn star_routing_at_zero_regret() {
    let d = Dir::new();
    let inst = d.fixture("STAR3");
    let sol = d.s("sol.json");
    ok(&["solve", "rvrp-r2", "--instance", &inst, "--regret", "0", "--theta", "0.3333", "--out", &sol]);
    let v = json(Path::new(&sol));
    let count = v["paths"].as_array().unwrap().len();
    assert!(count <= 45);
    assert_eq!(num(&v["objective"]) as usize, count);
    assert!((v["certificate"]["ratio_bound"].as_f64().unwrap() - 15.0).abs() < 1e-3);
    ok(&["check", "--instance", &inst, "--solution", &sol]);
}

#[test]
fn ladder_path_within_twice_lp() {
    let d = Dir::new();
    let inst = d.s("gk4.json");
    ok(&["gen", "gk", "--k", "4", "--out", &inst]);
    let sol = d.s("sol.json");
    ok(&["solve", "regret-tsp-path", "--instance", &inst, "--end", "t", "--out", &sol]);
    let v = json(Path::new(&sol));
    let lp = v["lp_value"].as_f64().unwrap();
    assert!(lp <= 4.0 + 1e-6);
    assert!(num(&v["objective"]) <= 8.0);
    assert!(num(&v["objective"]) <= 2.0 * lp + 1e-6);
    assert_eq!(v["paths"][0].as_array().unwrap().len(), 10);
    ok(&["check", "--instance", &inst, "--solution", &sol]);
}

#[test]
fn ladder_oracle_matches_library() {
    let d = Dir::new();
    let inst = d.s("gk4.json");
    ok(&["gen", "gk", "--k", "4", "--out", &inst]);
    let sol = d.s("opt.json");
    ok(&["oracle", "regret-tsp-path", "--instance", &inst, "--out", &sol]);
    let g = regroute::model::generators::gk(4).unwrap();
    let want = regroute::oracles::exact_regret_tsp_path(&g, g.n() - 1).unwrap().value;
    let v = json(Path::new(&sol));
    assert_eq!(v["objective"].as_str().unwrap(), regroute::num::format_rational(&want));
    assert_eq!(num(&v["objective"]), 6.0);
}

#[test]
fn p2p_reduction_with_exact_subsolver() {
    let d = Dir::new();
    let inst = d.fixture("LINE3");
    let sol = d.s("sol.json");
    let args = ["--instance", &inst, "--end", "b", "--budget", "2", "--out", &sol];
    ok(&[&["solve", "p2p-orienteering"], &args[..], &["--p2p-mode", "reduction", "--alpha", "oracle"]].concat());
    let got = num(&json(Path::new(&sol))["objective"]);
    ok(&[&["oracle", "p2p-orienteering"], &args[..]].concat());
    let opt = num(&json(Path::new(&sol))["objective"]);
    assert_eq!(opt, 1.0);
    assert!(got >= opt / 2.0);
    assert_eq!(got, 1.0);
}

#[test]
fn every_problem_revalidates_and_reproduces() {
    let d = Dir::new();
    let inst = d.s("e.json");
    ok(&["gen", "euclidean", "--n", "5", "--seed", "11", "--out", &inst]);
    let cases: [&[&str]; 7] = [
        &["rooted-orienteering", "--budget", "8"],
        &["regret-orienteering", "--regret", "3"],
        &["p2p-orienteering", "--end", "c2", "--budget", "20"],
        &["p2p-orienteering", "--end", "c2", "--budget", "20", "--p2p-mode", "reduction", "--alpha", "lp"],
        &["rvrp-r1", "--regret", "2.5"],
        &["rvrp-r2", "--regret", "2.5"],
        &["regret-tsp-path", "--end", "c3", "--tsp-mode", "full"],
    ];
    for (i, case) in cases.iter().enumerate() {
        let mut texts = Vec::new();
        for round in 0..2 {
            let sol = d.s(&format!("s{i}-{round}.json"));
            let rep = d.s(&format!("r{i}-{round}.json"));
            let args = [&["solve", case[0], "--instance", &inst], &case[1..], &["--out", &sol, "--report", &rep, "--with-oracle"]].concat();
            ok(&args);
            ok(&["check", "--instance", &inst, "--solution", &sol]);
            let r = json(Path::new(&rep));
            assert!(r["ratio"].as_f64().unwrap() <= r["ratio_bound"].as_f64().unwrap() + 1e-6, "{case:?}: {r}");
            texts.push((std::fs::read(&sol).unwrap(), std::fs::read(&rep).unwrap()));
        }
        assert_eq!(texts[0], texts[1], "{case:?} is not reproducible");
    }
}

#[test]
fn tampered_solution_is_rejected() {
    let d = Dir::new();
    let inst = d.fixture("STAR3");
    let sol = d.s("sol.json");
    ok(&["solve", "rooted-orienteering", "--instance", &inst, "--budget", "4", "--out", &sol]);
    let mut v = json(Path::new(&sol));
    v["paths"] = serde_json::json!([["r", "u", "v", "w"]]);
    v["objective"] = Value::String("3".into());
    std::fs::write(&sol, v.to_string()).unwrap();
    let out = run(&["check", "--instance", &inst, "--solution", &sol]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn exit_codes() {
    let d = Dir::new();
    let line = d.fixture("LINE3");
    let out = run(&["solve", "p2p-orienteering", "--instance", &line, "--end", "b", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let big = d.s("big.json");
    ok(&["gen", "euclidean", "--n", "16", "--seed", "3", "--out", &big]);
    let out = run(&["oracle", "rooted-orienteering", "--instance", &big, "--budget", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit is 14"));
    let out = run(&["solve", "rvrp-r2", "--instance", &line]);
    assert_eq!(out.status.code(), Some(1));
    let bad = d.s("bad.json");
    std::fs::write(&bad, "{").unwrap();
    assert_eq!(run(&["solve", "rvrp-r2", "--instance", &bad, "--regret", "1"]).status.code(), Some(1));
}

#[test]
fn gap_suite_rows() {
    let d = Dir::new();
    let csv = d.s("gap.csv");
    ok(&["bench", "--gap-suite", "--B", "10", "--k-max", "3", "--out", &csv]);
    let mut r = csv::Reader::from_path(&csv).unwrap();
    let head: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(&head[..8], ["instance", "problem", "lp", "rounded", "oracle", "ratio", "bound", "time_ms"]);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    let get = |p: &str| rows.iter().find(|x| &x[1] == p).unwrap_or_else(|| panic!("no {p} row"));
    for p in ["ro-single-flow", "ro-no-depth", "ro-shared-budget"] {
        let row = get(p);
        assert!(row[2].parse::<f64>().unwrap() >= 6.0 - 1e-6, "{p}");
        assert_eq!(row[4].parse::<f64>().unwrap(), 2.0);
    }
    assert!(get("ro-full")[2].parse::<f64>().unwrap() <= 6.0 + 1e-6);
    assert_eq!(rows.iter().filter(|x| &x[1] == "tsp-degree").count(), 2);
}

#[test]
fn directory_bench_respects_bounds() {
    let d = Dir::new();
    let dir = d.path("inst");
    std::fs::create_dir(&dir).unwrap();
    for name in ["LINE3", "STAR3", "GK2"] {
        ok(&["gen", "fixture", name, "--out", &dir.join(format!("{name}.json")).to_string_lossy()]);
    }
    ok(&["gen", "euclidean", "--n", "4", "--seed", "5", "--out", &dir.join("e.json").to_string_lossy()]);
    std::fs::write(dir.join("zz-broken.json"), "not json").unwrap();
    let (a, b) = (d.s("a.csv"), d.s("b.csv"));
    let dir = dir.to_string_lossy().into_owned();
    ok(&["bench", "--dir", &dir, "--out", &a, "--jobs", "2"]);
    ok(&["bench", "--dir", &dir, "--out", &b, "--jobs", "1"]);
    let load = |p: &str| -> Vec<csv::StringRecord> { csv::Reader::from_path(p).unwrap().records().map(Result::unwrap).collect() };
    let (ra, rb) = (load(&a), load(&b));
    assert_eq!(ra.len(), 4 * 6 + 1);
    for (x, y) in ra.iter().zip(&rb) {
        let drop_time = |r: &csv::StringRecord| r.iter().enumerate().filter(|(i, _)| *i != 7).map(|(_, f)| f.to_string()).collect::<Vec<_>>();
        assert_eq!(drop_time(x), drop_time(y));
    }
    for row in &ra {
        if &row[0] == "zz-broken" {
            assert!(row[8].starts_with("error"));
            continue;
        }
        assert!(row[8].is_empty(), "{row:?}");
        let ratio: f64 = row[5].parse().unwrap();
        let bound: f64 = row[6].parse().unwrap();
        assert!(ratio <= bound + 1e-6, "{row:?}");
    }
}

#[test]
fn unreadable_directory_fails() {
    let d = Dir::new();
    let out = run(&["bench", "--dir", &d.s("missing"), "--out", &d.s("x.csv")]);
    assert_eq!(out.status.code(), Some(1));
}
