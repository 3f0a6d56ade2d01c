use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_otisham"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Writes OTIS(BF(m,n)) to `dir` and returns its path.
fn otis_file(dir: &Path, m: usize, n: usize) -> PathBuf {
    let base = path(dir, &format!("b{m}{n}.el"));
    let g = path(dir, &format!("o{m}{n}.el"));
    assert_eq!(code(&run(&["gen", "bowtie", "--m", &m.to_string(), "--n", &n.to_string(), "--out", s(&base)])), 0);
    assert_eq!(code(&run(&["otis", "--in", s(&base), "--out", s(&g)])), 0);
    g
}

#[test]
fn gen_prints_edge_list() {
    let o = run(&["gen", "cycle", "--k", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout), "V 3\n1 2\n2 3\n3 1\n");
    let o = run(&["--json", "gen", "butterfly", "--dim", "3"]);
    let r = json(&o);
    assert_eq!((r["result"]["vertices"].as_u64(), r["result"]["edges"].as_u64()), (Some(24), Some(48)));
}

#[test]
fn usage_errors_exit_4() {
    assert_eq!(code(&run(&["frobnicate"])), 4);
    assert_eq!(code(&run(&["gen", "bowtie", "--m", "2", "--n", "5"])), 4);
    assert_eq!(code(&run(&["decide", "--in", "/nonexistent/graph.el"])), 4);
    assert_eq!(code(&run(&["sweep", "--max-base", "4"])), 4);
    assert_eq!(code(&run(&["--json", "ham-build", "--m", "3", "--n", "5", "--dot"])), 4);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn decide_and_refute_bf44() {
    let dir = tempfile::tempdir().unwrap();
    let g = otis_file(dir.path(), 4, 4);
    let o = run(&["--json", "decide", "--in", s(&g)]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["result"]["verdict"], "non_hamiltonian");
    assert!(r["result"]["witness"].is_null());
    assert_eq!(r["inputs"].as_array().unwrap().len(), 1);
    let o = run(&["--json", "refute-count", "--in", s(&g)]);
    let r = json(&o);
    assert_eq!(r["result"]["budget"], 28);
    assert_eq!(r["result"]["bound"], 29);
    let g46 = otis_file(dir.path(), 4, 6);
    let r = json(&run(&["--json", "refute-count", "--in", s(&g46)]));
    assert_eq!(r["result"]["inconclusive"], true);
}

#[test]
fn decide_budget_exhaustion_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let g = otis_file(dir.path(), 4, 6);
    let o = run(&["--json", "decide", "--in", s(&g), "--budget-nodes", "1"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["result"]["verdict"], "inconclusive");
}

#[test]
fn seeded_decide_reports_the_contradiction() {
    let dir = tempfile::tempdir().unwrap();
    let g = otis_file(dir.path(), 4, 6);
    let seed = path(dir.path(), "seed.json");
    std::fs::write(&seed, r#"{"forced":[["4:1","4:4"],["4:3","4:4"],["4:2","4:3"]]}"#).unwrap();
    let o = run(&["--json", "decide", "--in", s(&g), "--seed", s(&seed)]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["result"]["verdict"], "non_hamiltonian");
    // Propagation alone refutes the seed; FIFO order meets an overfilled
    // vertex before the subcycle closes.
    assert_eq!(r["result"]["root_contradiction"]["kind"], "vertex_overfilled");
    assert_eq!(r["result"]["root_contradiction"]["witness"][0], "2:4");
    std::fs::write(&seed, r#"{"forced":[["4:1","4:9"]]}"#).unwrap();
    assert_eq!(code(&run(&["decide", "--in", s(&g), "--seed", s(&seed)])), 4);
}

#[test]
fn build_verify_ist_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = otis_file(dir.path(), 3, 5);
    let cert = path(dir.path(), "c.json");
    let o = run(&["--json", "ham-build", "--m", "3", "--n", "5", "--cert-out", s(&cert), "--emit-key-edges"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["result"]["cycle"]["verified"], true);
    assert_eq!(r["result"]["cycle"]["order"].as_array().unwrap().len(), 49);
    assert!(r["result"]["key_edges"].as_array().unwrap().iter().all(|k| k["rule"].as_str().is_some()));

    assert_eq!(code(&run(&["verify", "--in", s(&g), "--cycle", s(&cert)])), 0);
    let o = run(&["--json", "ist", "--cycle", s(&cert), "--root", "1:1", "--graph", s(&g)]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["result"]["independent"], true);
    assert_eq!(r["result"]["t1"].as_object().unwrap().len(), 48);
    assert_eq!(code(&run(&["ist", "--cycle", s(&cert), "--root", "9:9"])), 4);

    let o = run(&["export", "--in", s(&g), "--format", "dot", "--cycle", s(&cert)]);
    let dot = String::from_utf8(o.stdout).unwrap();
    assert!(dot.contains("subgraph \"cluster_1\""));
    assert_eq!(dot.matches("color=red").count(), 49);

    // A certificate for another graph fails verification.
    let other = otis_file(dir.path(), 3, 6);
    assert_eq!(code(&run(&["verify", "--in", s(&other), "--cycle", s(&cert)])), 3);
    let mut c: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    c["order"].as_array_mut().unwrap().swap(1, 2);
    std::fs::write(&cert, c.to_string()).unwrap();
    assert_eq!(code(&run(&["verify", "--in", s(&g), "--cycle", s(&cert)])), 3);
}

#[test]
fn ham_build_unsupported_and_figure_cases() {
    let r = json(&run(&["--json", "ham-build", "--m", "4", "--n", "4"]));
    assert_eq!(r["result"]["failure"]["kind"], "unsupported_class");
    let r = json(&run(&["--json", "ham-build", "--m", "3", "--n", "3"]));
    assert_eq!(r["result"]["method"], "oracle");
    let o = run(&["ham-build", "--m", "3", "--n", "5", "--dot"]);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("graph G {"));
}

#[test]
fn json_is_byte_identical_across_runs() {
    for args in [
        &["--json", "ham-build", "--m", "5", "--n", "6"][..],
        &["--json", "reproduce"][..],
        &["--json", "sweep", "--max-base", "7"][..],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!String::from_utf8_lossy(&a.stdout).contains("timings_ms"));
    }
    let r = json(&run(&["--json", "--timings", "gen", "path", "--k", "1"]));
    assert!(r["timings_ms"]["wall"].is_u64());
}

#[test]
fn reproduce_passes_and_tamper_fails() {
    let o = run(&["--json", "reproduce"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["result"]["degree_five_bf44"].as_array().unwrap().len(), 6);
    let o = run(&["reproduce", "--tamper"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL bf44.edges"));
}

#[test]
fn sweep_respects_thread_cap_and_orders_items() {
    let run_with = |threads: &str| {
        bin()
            .args(["--json", "sweep", "--max-base", "9"])
            .env("OTISHAM_THREADS", threads)
            .output()
            .unwrap()
    };
    let (one, four) = (run_with("1"), run_with("4"));
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    let r = json(&one);
    assert_eq!(r["result"]["fail"], 0);
    assert_eq!(r["result"]["unsupported"], 2);
    assert_eq!(code(&run_with("zero")), 4);
}
