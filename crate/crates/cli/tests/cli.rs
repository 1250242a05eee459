//! End-to-end tests driving the `gradlab` binary.

use std::path::Path;
use std::process::{Command, Output};

fn gradlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gradlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("GRADLAB_OUT")
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("read {name}: {e}"))
}

fn summary(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&read(dir, name)).expect("valid summary json")
}

#[test]
fn gen_is_deterministic_and_matches_schema() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let out = gradlab(
        &["gen", "--family", "deasmundis", "--n", "5", "--ncond", "3", "--out", "p.json"],
        d,
    );
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&read(d, "p.json")).unwrap();
    assert_eq!(doc["kind"], "spectral");
    assert_eq!(doc["n"], 5);
    let eigs = doc["eigenvalues"].as_array().unwrap();
    assert_eq!(eigs.len(), 5);
    assert!((eigs[0].as_f64().unwrap() - 1000.0).abs() < 1e-9);
    assert_eq!(eigs[4].as_f64().unwrap(), 1.0);
    assert_eq!(doc["x_star"], serde_json::json!([1.0, 1.0, 1.0, 1.0, 1.0]));

    // repeated generation is byte-identical
    gradlab(
        &["gen", "--family", "random", "--n", "50", "--kappa", "1e4", "--seed", "7", "--out", "r1.json"],
        d,
    );
    gradlab(
        &["gen", "--family", "random", "--n", "50", "--kappa", "1e4", "--seed", "7", "--out", "r2.json"],
        d,
    );
    assert_eq!(read(d, "r1.json"), read(d, "r2.json"));

    let out = gradlab(&["gen", "--family", "explicit", "--eigs", "4,1", "--out", "e.json"], d);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&read(d, "e.json")).unwrap();
    assert_eq!(doc["eigenvalues"], serde_json::json!([4.0, 1.0]));
}

#[test]
fn run_reproduces_reference_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    gradlab(
        &["gen", "--family", "deasmundis", "--n", "5", "--ncond", "3", "--out", "p.json"],
        d,
    );

    let out = gradlab(
        &["run", "--problem", "p.json", "--method", "bb1", "--out", "bb1"],
        d,
    );
    assert!(out.status.success(), "bb1 run should converge (exit 0)");
    let s = summary(d, "bb1/summary.json");
    let iters = s["iterations"].as_u64().unwrap();
    assert!((247..=263).contains(&iters), "bb1 iterations {iters}");

    let out = gradlab(
        &["run", "--problem", "p.json", "--method", "rbb", "--tau", "ratio_mu1", "--out", "rbb"],
        d,
    );
    assert!(out.status.success());
    let s = summary(d, "rbb/summary.json");
    let iters = s["iterations"].as_u64().unwrap();
    assert!((105..=129).contains(&iters), "rbb iterations {iters}");

    // tau = 0 regularization is exactly the first two-point rule
    gradlab(
        &["run", "--problem", "p.json", "--method", "rbb", "--tau", "constant:0", "--out", "rbb0"],
        d,
    );
    let s0 = summary(d, "rbb0/summary.json");
    let sb = summary(d, "bb1/summary.json");
    assert_eq!(s0["iterations"], sb["iterations"]);

    // identical invocations produce identical bytes
    gradlab(
        &["run", "--problem", "p.json", "--method", "bb1", "--out", "bb1_again"],
        d,
    );
    assert_eq!(read(d, "bb1/trace.csv"), read(d, "bb1_again/trace.csv"));
    assert_eq!(read(d, "bb1/summary.json"), read(d, "bb1_again/summary.json"));
}

#[test]
fn run_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    gradlab(&["gen", "--family", "explicit", "--eigs", "4,1", "--out", "e.json"], d);

    // max-iters exhaustion
    let out = gradlab(
        &["run", "--problem", "e.json", "--method", "sd", "--max-iters", "5", "--tol", "1e-300", "--out", "m"],
        d,
    );
    assert_eq!(out.status.code(), Some(2));

    // a frozen iterate with a nonzero gradient degenerates the two-point rule
    let out = gradlab(
        &[
            "run", "--problem", "e.json", "--method", "bb1", "--x0", "1000,1000",
            "--alpha-init", "fixed:1e20", "--tol", "1e-300", "--out", "g",
        ],
        d,
    );
    assert_eq!(out.status.code(), Some(3));

    // unparsable problem file
    std::fs::write(d.join("bad.json"), "not json").unwrap();
    let out = gradlab(&["run", "--problem", "bad.json", "--method", "bb1", "--out", "b"], d);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn sweep_grid_and_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let config = r#"{
        "problems": [
            {"spectrum": {"family": "deasmundis", "n": 5, "ncond": 3.0}},
            {"spectrum": {"family": "explicit", "eigenvalues": [4.0, 1.0]}}
        ],
        "policies": [
            {"rule": "sd"},
            {"rule": "bb1"},
            {"rule": "rbb", "tau": {"kind": "ratio_mu1"}}
        ]
    }"#;
    std::fs::write(d.join("sweep.json"), config).unwrap();
    let out = gradlab(&["sweep", "--config", "sweep.json", "--out", "s1"], d);
    assert!(out.status.success());
    let csv = read(d, "s1/results.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "problem,policy,iterations,final_grad_norm,status");
    assert_eq!(lines.len(), 7, "header + 6 rows");

    // on the ill-conditioned problem the exact line search needs by far the
    // most iterations
    let iters: Vec<u64> = lines[1..4]
        .iter()
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert!(iters[0] > iters[1] && iters[0] > iters[2], "sd slowest: {iters:?}");

    // per-run traces exist for every cell
    for i in 0..2 {
        for j in 0..3 {
            assert!(d.join(format!("s1/trace_{i}_{j}.csv")).exists());
        }
    }

    let out = gradlab(&["sweep", "--config", "sweep.json", "--out", "s2"], d);
    assert!(out.status.success());
    assert_eq!(read(d, "s1/results.csv"), read(d, "s2/results.csv"));
}

#[test]
fn roots_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let out = gradlab(&["roots", "--d", "2"], d);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for root in doc["roots"].as_array().unwrap() {
        assert!((root["modulus"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-10);
    }

    let out = gradlab(&["roots", "--d", "3"], d);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let has_minus_one = doc["roots"]
        .as_array()
        .unwrap()
        .iter()
        .any(|r| (r["re"].as_f64().unwrap() + 1.0).abs() < 1e-10 && r["im"].as_f64().unwrap().abs() < 1e-10);
    assert!(has_minus_one);

    let out = gradlab(&["roots", "--rbb"], d);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for root in doc["roots"].as_array().unwrap() {
        assert!((root["modulus"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
    assert!((doc["theta"].as_f64().unwrap() - 1.2094292028881888).abs() < 1e-12);

    let out = gradlab(&["roots", "--d", "100"], d);
    assert!(!out.status.success());
}

#[test]
fn analyze_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    gradlab(
        &["gen", "--family", "deasmundis", "--n", "5", "--ncond", "3", "--out", "p.json"],
        d,
    );
    gradlab(&["run", "--problem", "p.json", "--method", "bb1", "--out", "bb1"], d);
    let out = gradlab(
        &["analyze", "--trace", "bb1/trace.csv", "--problem", "p.json"],
        d,
    );
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["oscillation"]["sign_changes"].as_u64().unwrap() > 0);
    assert!(doc["recursion"]["windows_checked"].as_u64().unwrap() > 0);
    assert!(!doc["descent"].as_array().unwrap().is_empty());

    // a 2-D exact line-search trace alternates around 1 every step
    gradlab(&["gen", "--family", "explicit", "--eigs", "8,1", "--x-star", "0,0", "--out", "e.json"], d);
    gradlab(
        &[
            "run", "--problem", "e.json", "--method", "sd", "--x0", "1,2", "--max-iters", "40",
            "--tol", "1e-300", "--gradient-mode", "recursive", "--out", "sd",
        ],
        d,
    );
    let out = gradlab(&["analyze", "--trace", "sd/trace.csv"], d);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["oscillation"]["alternating"], serde_json::json!(true));
    assert!(doc["recursion"].is_null());

    // missing diagnostic column is reported by name
    std::fs::write(d.join("short.csv"), "k,f,grad_norm,alpha,tau,r,xi,eta,h\n").unwrap();
    let out = gradlab(&["analyze", "--trace", "short.csv"], d);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eta_bar"));
}

#[test]
fn env_var_overrides_out() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let out = Command::new(env!("CARGO_BIN_EXE_gradlab"))
        .args(["gen", "--family", "explicit", "--eigs", "4,1", "--out", "ignored.json"])
        .current_dir(d)
        .env("GRADLAB_OUT", "env.json")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(d.join("env.json").exists());
    assert!(!d.join("ignored.json").exists());
}

#[test]
fn trace_csv_round_trips_through_analyze_input_path() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    gradlab(&["gen", "--family", "explicit", "--eigs", "9,3,1", "--out", "p.json"], d);
    gradlab(
        &["run", "--problem", "p.json", "--method", "rbb", "--tau", "constant:1", "--tol", "1e-8", "--out", "r"],
        d,
    );
    let text = read(d, "r/trace.csv");
    let rows = gradlab_core::trace_io::parse_trace_csv(&text).unwrap();
    assert_eq!(gradlab_core::trace_io::csv_rows_to_string(&rows), text);
}
