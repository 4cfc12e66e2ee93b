use std::path::PathBuf;
use std::process::{Command, Output};

use vqsel_cli::{build_problem, RunConfig};
use vqsel_core::{qbp_energy, qubo::read_sparse, qubo_energy, Selection};

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/points.csv")
}

fn vqsel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vqsel")).args(args).output().unwrap()
}

fn with_fixture<'a>(sub: &'a str, extra: &[&'a str], path: &'a str) -> Vec<&'a str> {
    let mut v = vec![sub, "--input", path, "--header"];
    v.extend_from_slice(extra);
    v
}

#[test]
fn reported_objective_re_evaluates_from_echoed_config() {
    let path = fixture();
    let p = path.to_str().unwrap();
    for (formulation, solver) in [("kde", "constrained"), ("med", "exhaustive"), ("med", "sa")] {
        let out = vqsel(&with_fixture(
            "select",
            &["--k", "3", "--formulation", formulation, "--solver", solver, "--sweeps", "200"],
            p,
        ));
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let config: RunConfig = serde_json::from_value(doc["provenance"]["config"].clone()).unwrap();
        let problem = build_problem(&config).unwrap();
        let indices: Vec<usize> = serde_json::from_value(doc["selected_indices"].clone()).unwrap();
        let z = Selection::from_indices(problem.kernel.n(), &indices).unwrap();
        let expected = if solver == "constrained" {
            qbp_energy(&problem.qbp, &z).unwrap()
        } else {
            qubo_energy(&problem.qubo().unwrap(), &z).unwrap()
        };
        assert_eq!(doc["objective"].as_f64().unwrap(), expected, "{formulation}/{solver}");
        assert_eq!(doc["feasible"], true);
        assert!(doc["within_scatter"].is_f64());
        assert!(doc["equivalence"].is_null());
    }
}

#[test]
fn clustered_fixture_gets_one_prototype_per_cluster() {
    let path = fixture();
    let out = vqsel(&with_fixture("select", &["--k", "3"], path.to_str().unwrap()));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let idx: Vec<usize> = serde_json::from_value(doc["selected_indices"].clone()).unwrap();
    let clusters: Vec<usize> = idx.iter().map(|i| i / 4).collect();
    assert_eq!(clusters, vec![0, 1, 2]);
}

#[test]
fn exit_codes() {
    let path = fixture();
    let p = path.to_str().unwrap();
    // input error: k larger than the dataset
    assert_eq!(vqsel(&with_fixture("select", &["--k", "50"], p)).status.code(), Some(1));
    // input error: gamma with kde
    assert_eq!(vqsel(&with_fixture("select", &["--k", "2", "--gamma", "1"], p)).status.code(), Some(1));
    assert_eq!(vqsel(&["select", "--input", "/nonexistent.csv", "--k", "1"]).status.code(), Some(1));
    // verification failure with an impossible tolerance
    let out = vqsel(&with_fixture("verify", &["--k", "3", "--lambda", "80", "--tolerance=-1"], p));
    assert_eq!(out.status.code(), Some(3));
    // precondition: MED penalty must exceed 1
    assert_eq!(vqsel(&with_fixture("verify", &["--k", "3", "--lambda", "0.5"], p)).status.code(), Some(1));
    // malformed arguments
    assert_eq!(vqsel(&["select", "--k", "x"]).status.code(), Some(1));
    assert_eq!(vqsel(&["select", "--k", "1", "--kernel", "cosine:1"]).status.code(), Some(1));
    assert_eq!(vqsel(&["--help"]).status.code(), Some(0));
}

#[test]
fn capacity_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("line.csv");
    std::fs::write(&data, (0..40).map(|i| format!("{i}\n")).collect::<String>()).unwrap();
    let out = vqsel(&["select", "--input", data.to_str().unwrap(), "--k", "20"]);
    assert_eq!(out.status.code(), Some(2));
    let out = vqsel(&["select", "--input", data.to_str().unwrap(), "--k", "2", "--solver", "exhaustive"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn precomputed_kernel_verify() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("k.csv");
    std::fs::write(&good, "1,0.5,0.2\n0.5,1,0.1\n0.2,0.1,1\n").unwrap();
    let spec = format!("precomputed:{}", good.display());
    let out = vqsel(&["verify", "--kernel", &spec, "--k", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "2,0.5\n0.5,2\n").unwrap();
    let spec = format!("precomputed:{}", bad.display());
    assert_eq!(vqsel(&["verify", "--kernel", &spec, "--k", "1"]).status.code(), Some(1));
}

#[test]
fn export_qubo_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("q.txt");
    let path = fixture();
    let out = vqsel(&with_fixture(
        "export-qubo",
        &["--k", "3", "--formulation", "med", "--lambda", "4", "--output", target.to_str().unwrap()],
        path.to_str().unwrap(),
    ));
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    let q = read_sparse(text.as_bytes()).unwrap();
    let config = RunConfig {
        input_path: Some(path.clone()),
        has_header: true,
        formulation: vqsel_cli::Formulation::Med,
        lambda: Some(4.0),
        ..RunConfig::new(vqsel_cli::KernelArg::Rbf(2.0), 3)
    };
    let direct = build_problem(&config).unwrap().qubo().unwrap();
    for (a, b) in q.matrix().iter().zip(direct.matrix().iter()) {
        assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
    }
}

#[test]
fn baseline_report() {
    let path = fixture();
    let out = vqsel(&with_fixture("baseline", &["--k", "3", "--distance", "euclidean", "--seed", "5"], path.to_str().unwrap()));
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let trace: Vec<f64> = serde_json::from_value(doc["scatter_trace"].clone()).unwrap();
    assert!(trace.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert_eq!(doc["labels"].as_array().unwrap().len(), 12);
}
