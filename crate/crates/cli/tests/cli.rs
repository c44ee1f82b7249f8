use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use steiner_qubo::model_file::read_model;
use steiner_qubo::stp::parse_stp;
use steiner_qubo_core::qubo::{FormulationConfig, SteinerQubo};
use steiner_qubo_core::PathFamily;

const BIN: &str = env!("CARGO_BIN_EXE_steiner-qubo");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(BIN)
        .args(args)
        .env(key, val)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn path_instance(dir: &Path) -> PathBuf {
    write(
        dir,
        "path.stp",
        "SECTION Graph\nNodes 4\nEdges 3\nE 0 1 3\nE 1 2 4\nE 2 3 5\nEND\n\
         SECTION Terminals\nTerminals 2\nT 0\nT 3\nEND\nEOF\n",
    )
}

fn strip_times(mut v: Value) -> Value {
    fn walk(v: &mut Value) {
        match v {
            Value::Object(m) => {
                m.remove("wall_time_s");
                m.values_mut().for_each(walk);
            }
            Value::Array(a) => a.iter_mut().for_each(walk),
            _ => {}
        }
    }
    walk(&mut v);
    v
}

#[test]
fn gen_is_seeded_and_parses() {
    let a = run(&["gen", "--seed", "4"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&run(&["gen", "--seed", "4"])));
    assert_ne!(stdout(&a), stdout(&run(&["gen", "--seed", "5"])));
    let inst = parse_stp(&stdout(&a)).unwrap();
    let g = inst.graph;
    assert_eq!(g.n(), 11);
    assert_eq!(g.m(), 3);
    assert_eq!(g.root(), 0);
    assert!(g.terminals().contains(&0));
    assert!(g.edges().iter().all(|e| (100..=1000).contains(&e.w)));
    assert!(g.reachable_from(0).iter().all(|&r| r));
}

#[test]
fn build_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("g.stp");
    let model = dir.path().join("g.qubo");
    assert!(run(&["gen", "--seed", "1", "-o", inst.to_str().unwrap()])
        .status
        .success());
    let o = run(&[
        "build",
        "--instance",
        inst.to_str().unwrap(),
        "-o",
        model.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("800 variables (396 path, 8 slack, 396 overlap)"));
    let text = std::fs::read_to_string(&model).unwrap();
    assert!(text.contains("# path_vars: 396\n"));
    assert!(text.contains("# steps: 11\n"));
    let (m, h) = read_model(&text).unwrap();
    assert_eq!(m.num_vars(), 800);
    assert_eq!(h.lambda, Some(10_000));
}

#[test]
fn build_single_edge_objective() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(
        dir.path(),
        "e.stp",
        "SECTION Graph\nNodes 2\nEdges 1\nE 0 1 7\nEND\nSECTION Terminals\nT 0\nT 1\nEND\nEOF\n",
    );
    let o = run(&[
        "build",
        "--instance",
        inst.to_str().unwrap(),
        "--steps",
        "1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (m, h) = read_model(&stdout(&o)).unwrap();
    assert_eq!(h.steps, Some(1));
    let g = parse_stp(&std::fs::read_to_string(&inst).unwrap())
        .unwrap()
        .graph;
    let q = SteinerQubo::build(
        g.clone(),
        &FormulationConfig {
            steps: Some(1),
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(&m, q.model());
    // target 1 steps across the edge, paying its weight
    let family = PathFamily::from_tree(&g, g.edges(), 1, 0).unwrap();
    assert_eq!(m.energy(&family.encode(q.index())), 7);
}

#[test]
fn missing_instance_fails() {
    let o = run(&["build", "--instance", "/nonexistent/x.stp"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/nonexistent/x.stp"));
    let o = run(&["solve"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--instance"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["solve", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["solve", "--sampler", "gpu"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let inst = path_instance(dir.path());
    let o = run(&[
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--reads",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn solve_single_terminal() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(
        dir.path(),
        "one.stp",
        "SECTION Graph\nNodes 3\nEdges 2\nE 0 1 3\nE 1 2 4\nEND\nSECTION Terminals\nT 0\nEND\nEOF\n",
    );
    let o = run(&[
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--reads",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tree_weight"], 0);
    assert_eq!(v["feasible"], true);
    assert_eq!(v["tree_edges"], Value::Array(vec![]));
}

#[test]
fn solve_path_graph() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path_instance(dir.path());
    let o = run(&[
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--reads",
        "50",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tree_weight"], 12);
    assert_eq!(v["verified"], true);
    for key in [
        "instance",
        "n",
        "m",
        "tree_edges",
        "feasible",
        "violations",
        "energy",
        "reads",
        "sweeps",
        "seed",
        "config",
        "sampler",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["violations"]["H6"], 0);
    assert_eq!(v["config"]["reads"], 50);
}

#[test]
fn solve_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path_instance(dir.path());
    let args = [
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--reads",
        "30",
        "--seed",
        "7",
        "--sampler",
        "sa",
    ];
    let a = stdout(&run(&args));
    let b = stdout(&run_env(&args, "STEINER_QUBO_THREADS", "1"));
    let strip = |s: &str| strip_times(serde_json::from_str(s).unwrap());
    assert_eq!(strip(&a), strip(&b));
    let without = |s: &str| {
        s.lines()
            .filter(|l| !l.contains("wall_time_s"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(without(&a), without(&b));
}

#[test]
fn bad_thread_cap() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path_instance(dir.path());
    let o = run_env(
        &["solve", "--instance", inst.to_str().unwrap()],
        "STEINER_QUBO_THREADS",
        "zero",
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("STEINER_QUBO_THREADS"));
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path_instance(dir.path());
    let cfg = write(
        dir.path(),
        "run.toml",
        "reads = 12\nseed = 3\nsweeps = 50\n",
    );
    let o = run(&[
        "solve",
        "--config",
        cfg.to_str().unwrap(),
        "--instance",
        inst.to_str().unwrap(),
        "--seed",
        "4",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["reads"], 12);
    assert_eq!(v["config"]["sweeps"], 50);
    assert_eq!(v["seed"], 4);
    let bad = write(dir.path(), "bad.toml", "raeds = 12\n");
    let o = run(&[
        "solve",
        "--config",
        bad.to_str().unwrap(),
        "--instance",
        inst.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dot_output() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path_instance(dir.path());
    let o = run(&[
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--reads",
        "30",
        "--format",
        "dot",
    ]);
    let dot = stdout(&o);
    assert!(dot.starts_with("graph "));
    assert!(dot.contains("3 [shape=doublecircle]"));
    assert!(dot.contains("2 -- 3 [label=\"5\", style=bold"));
}

#[test]
fn verify_prints_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path_instance(dir.path());
    let o = run(&["verify", "--instance", inst.to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["optimum_weight"], 12);
    assert_eq!(v["brute_force_weight"], 12);
    assert_eq!(v["tree_edges"].as_array().unwrap().len(), 3);
}

#[test]
fn bench_schema_and_repeatability() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path_instance(dir.path());
    let args = [
        "bench",
        "--instance",
        inst.to_str().unwrap(),
        "--reads",
        "20",
        "--runs",
        "3",
        "--seed",
        "2",
    ];
    let a = run(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    let rate = v["optimality_rate"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&rate));
    assert!((0.0..=1.0).contains(&v["feasibility_rate"].as_f64().unwrap()));
    assert_eq!(v["runs"].as_array().unwrap().len(), 3);
    for r in v["runs"].as_array().unwrap() {
        assert!(r.get("best_energy").is_some() && r.get("wall_time_s").is_some());
    }
    let b: Value = serde_json::from_str(&stdout(&run(&args))).unwrap();
    assert_eq!(strip_times(v), strip_times(b));

    let o = run(&["bench", "--instance", inst.to_str().unwrap(), "--runs", "0"]);
    assert_eq!(o.status.code(), Some(1));
}
