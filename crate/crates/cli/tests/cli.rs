//! End-to-end runs of the binary: exit codes, files written, determinism.

use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarselab"))
        .args(args)
        .env_remove("COARSELAB_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn growth_writes_series_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let csv = dir.path().join("g.csv");
    let gp = dir.path().join("g.gp");
    let o = run(&[
        "growth",
        "grid:2",
        "--n",
        "50",
        "--out",
        out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--gnuplot",
        gp.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let series = v["result"]["series"].as_array().unwrap();
    assert_eq!(series.len(), 51);
    // |B(n)| = 2n² + 2n + 1 in the square lattice
    assert_eq!(series[50].as_u64(), Some(2 * 2500 + 100 + 1));
    let log = fs::read_to_string(dir.path().join("g.json.log")).unwrap();
    assert!(log.contains("elapsed_s"));
    assert!(!fs::read_to_string(&out).unwrap().contains("elapsed"));
    let table = fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), 52);
    assert!(fs::read_to_string(&gp).unwrap().contains("g.csv"));
}

#[test]
fn tripod_refutation_exits_zero() {
    let o = run(&[
        "qisearch",
        "--domain",
        "tripod:4",
        "--codomain",
        "grid:1",
        "--L",
        "1",
        "--A",
        "1",
        "--pin",
        "center:0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["outcome"], "refuted_by_exhaustion");
}

#[test]
fn budget_exhaustion_exits_three() {
    let o = Command::new(env!("CARGO_BIN_EXE_coarselab"))
        .args([
            "qisearch",
            "--domain",
            "tripod:4",
            "--codomain",
            "grid:1",
            "--L",
            "1",
            "--A",
            "1",
            "--pin",
            "center:0",
        ])
        .env("COARSELAB_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["result"]["outcome"], "budget_exceeded");
}

#[test]
fn sandwich_passes() {
    let o = run(&[
        "sandwich", "--base", "grid:2", "--alpha", "0.5", "--n", "60",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["pass"], true);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["growth", "torus:2", "--n", "3"],
        vec!["growth", "grid:2"],
        vec!["frobnicate"],
        vec![
            "sandwich", "--base", "tripod:2", "--alpha", "0.5", "--n", "3",
        ],
        vec!["decorate-info", "--alpha", "1.5"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = run(&["growth", "torus:2", "--n", "3"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn threshold_prints_a_single_integer() {
    let o = run(&[
        "threshold",
        "--alpha",
        "0.5",
        "--beta",
        "1",
        "--L",
        "1",
        "--A",
        "0",
        "--M",
        "0",
        "--D",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout), "21\n");
    let record: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(
        record["result"]["certified_window"],
        serde_json::json!([21, 210])
    );
}

#[test]
fn property_violations_exit_one() {
    // the cubic tree is not two-ended
    let o = run(&["chain", "tree:3", "--k-min", "-1", "--k-max", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let ratio = |xs: &str| {
        run(&[
            "ratio",
            "--alpha",
            "0.5",
            "--beta",
            "1",
            "--x",
            xs,
            "--require-decreasing",
        ])
    };
    assert_eq!(ratio("e^4,e^16,e^36").status.code(), Some(0));
    let o = ratio("e^36,e^16,e^4");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["result"]["strictly_decreasing"], false);
}

#[test]
fn chain_with_sampled_radius_records_seed() {
    let o = run(&[
        "chain", "grid:1", "--k-min", "-4", "--k-max", "4", "--window", "8", "--seed", "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["params"]["seed"], 7);
    assert_eq!(v["params"]["r"], 1);
    assert_eq!(v["params"]["samples"].as_array().unwrap().len(), 8);
    assert_eq!(v["result"]["audit"]["pass"], true);
}

#[test]
fn snapshot_round_trips_through_the_library() {
    let o = run(&["export-snapshot", "ladder", "--radius", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let (center, radius, edges) =
        coarselab::graph::parse_snapshot(&String::from_utf8_lossy(&o.stdout)).unwrap();
    assert_eq!((center.to_string().as_str(), radius), ("b:0,0", 3));
    assert!(!edges.is_empty());
}

#[test]
fn output_is_identical_across_thread_counts() {
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "qisearch",
            "--domain",
            "tripod:4",
            "--codomain",
            "grid:2",
            "--L",
            "1",
            "--A",
            "1",
            "--pin",
            "center:0,0",
        ],
        vec![
            "refute-ct",
            "decorate:grid:1:alpha=1",
            "--x",
            "x:3025",
            "--y",
            "x:2970",
            "--K",
            "1",
            "--R",
            "4",
        ],
        vec!["ends", "tree:3", "--r", "1,2", "--R-max", "9"],
        vec!["census", "--n", "3", "--L", "1", "--A", "1"],
        vec![
            "cubicalize-audit",
            "tree:5",
            "--radius",
            "3",
            "--pairs",
            "20",
            "--seed",
            "3",
        ],
        vec!["chain", "ladder", "--r", "1", "--window", "10"],
    ];
    for args in cases {
        let one = run(&[args.as_slice(), &["--threads", "1"]].concat());
        let eight = run(&[args.as_slice(), &["--threads", "8"]].concat());
        assert_eq!(one.status.code(), Some(0), "{args:?}");
        assert_eq!(one.stdout, eight.stdout, "{args:?}");
    }
}
