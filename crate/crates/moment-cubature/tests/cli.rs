//! Black-box tests of the command line interface: every subcommand is run
//! as a child process and judged only by its exit code, the files it leaves
//! behind, and the report JSON it prints.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_moment-cubature"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawning the binary")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process was killed by a signal")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout should be a JSON report")
}

/// Writes a fixture table and returns the parsed JSON it produced.
fn make_fixture(dir: &Path, name: &str, degree: usize, extra: &[&str]) -> std::path::PathBuf {
    let path = dir.join(format!("{name}.json"));
    let mut args = vec![
        "fixture".to_string(),
        name.to_string(),
        "--degree".to_string(),
        degree.to_string(),
        "--out".to_string(),
        path.display().to_string(),
    ];
    args.extend(extra.iter().map(|s| s.to_string()));
    let out = bin().args(&args).output().expect("spawning the binary");
    assert_eq!(code(&out), 0, "fixture {name} failed: {}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn fixture_circle_writes_a_parseable_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = make_fixture(dir.path(), "circle", 8, &[]);
    let text = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["max_total_degree"], 8);
    assert!(!v["moments"].as_array().unwrap().is_empty());
}

#[test]
fn fixture_ngon_without_vertex_count_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let out = run(&["fixture", "ngon", "--degree", "6", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(!path.exists());
}

#[test]
fn fixture_unknown_name_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let out = run(&["fixture", "lebesgue", "--degree", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn fixture_atoms_is_deterministic_and_leaves_a_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let a = make_fixture(dir.path(), "atoms", 6, &["--count", "3", "--seed", "11"]);
    let sidecar = a.with_extension("atoms.json");
    assert!(sidecar.exists(), "atom sidecar should be written next to the table");

    let b_path = dir.path().join("again.json");
    let out = run(&[
        "fixture", "atoms", "--degree", "6",
        "--out", b_path.to_str().unwrap(),
        "--count", "3", "--seed", "11",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b_path).unwrap());
    assert_eq!(
        std::fs::read(&sidecar).unwrap(),
        std::fs::read(b_path.with_extension("atoms.json")).unwrap(),
    );
}

#[test]
fn diagnose_flags_the_circle_and_reports_the_defect() {
    let dir = tempfile::tempdir().unwrap();
    let path = make_fixture(dir.path(), "circle", 8, &[]);
    let out = run(&["diagnose", "--moments", path.to_str().unwrap(), "--d", "3"]);
    assert_eq!(code(&out), 1, "arclength measure must fail the certificate");

    let report = stdout_json(&out);
    assert_eq!(report["certificate"]["passed"], false);
    let defect = report["diagnostics"]["defect"].as_f64().unwrap();
    let lambda = report["diagnostics"]["lambda_minus"].as_f64().unwrap();
    assert!((defect - 1.0).abs() < 1e-12);
    assert!((lambda + 1.0).abs() < 1e-10);
}

#[test]
fn diagnose_passes_an_atomic_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = make_fixture(dir.path(), "atoms", 6, &["--count", "3", "--seed", "7"]);
    let out = run(&["diagnose", "--moments", path.to_str().unwrap(), "--d", "2"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["certificate"]["passed"], true);
    assert_eq!(report["d"], 2);
}

#[test]
fn diagnose_rejects_a_table_that_is_too_short() {
    let dir = tempfile::tempdir().unwrap();
    let path = make_fixture(dir.path(), "circle", 4, &[]);
    let out = run(&["diagnose", "--moments", path.to_str().unwrap(), "--d", "4"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn gaussian_round_trip_through_files_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let moments = make_fixture(dir.path(), "atoms", 8, &["--count", "4", "--seed", "5"]);
    let cub = dir.path().join("cubature.json");
    let out = run(&[
        "quadrature",
        "--moments", moments.to_str().unwrap(),
        "--d", "3",
        "--mode", "gaussian",
        "--out", cub.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["cubature"]["kind"], "gaussian");
    assert_eq!(report["exactness"]["pass"], true);

    let check = run(&[
        "verify",
        "--moments", moments.to_str().unwrap(),
        "--cubature", cub.to_str().unwrap(),
        "--expect-kind", "gaussian",
    ]);
    assert_eq!(code(&check), 0);
}

#[test]
fn gaussian_on_the_circle_refuses_to_write() {
    let dir = tempfile::tempdir().unwrap();
    let moments = make_fixture(dir.path(), "circle", 8, &[]);
    let cub = dir.path().join("cubature.json");
    let out = run(&[
        "quadrature",
        "--moments", moments.to_str().unwrap(),
        "--d", "3",
        "--mode", "gaussian",
        "--out", cub.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(!cub.exists(), "a failed certificate must not leave a cubature file");
    let report = stdout_json(&out);
    assert_eq!(report["certificate"]["passed"], false);
}

#[test]
fn forcing_the_circle_still_fails_honestly() {
    let dir = tempfile::tempdir().unwrap();
    let moments = make_fixture(dir.path(), "circle", 8, &[]);
    let cub = dir.path().join("cubature.json");
    let out = run(&[
        "quadrature",
        "--moments", moments.to_str().unwrap(),
        "--d", "3",
        "--mode", "gaussian",
        "--force",
        "--out", cub.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1, "the shifted basis is a Jordan block; no eigenbasis exists");
    assert!(!cub.exists());
}

#[test]
fn harmonic_on_the_circle_verifies_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let moments = make_fixture(dir.path(), "circle", 8, &[]);
    let cub = dir.path().join("cubature.json");
    let out = run(&[
        "quadrature",
        "--moments", moments.to_str().unwrap(),
        "--d", "3",
        "--mode", "harmonic",
        "--out", cub.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["cubature"]["kind"], "harmonic");
    let radius = report["cubature"]["radius"].as_f64().unwrap();
    assert!((radius - 1.0).abs() < 1e-12);

    let check = run(&[
        "verify",
        "--moments", moments.to_str().unwrap(),
        "--cubature", cub.to_str().unwrap(),
        "--expect-kind", "harmonic",
    ]);
    assert_eq!(code(&check), 0);
}

#[test]
fn expect_kind_mismatch_is_a_contract_error() {
    let dir = tempfile::tempdir().unwrap();
    let moments = make_fixture(dir.path(), "circle", 8, &[]);
    let cub = dir.path().join("cubature.json");
    let out = run(&[
        "quadrature",
        "--moments", moments.to_str().unwrap(),
        "--d", "2",
        "--mode", "harmonic",
        "--out", cub.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let check = run(&[
        "verify",
        "--moments", moments.to_str().unwrap(),
        "--cubature", cub.to_str().unwrap(),
        "--expect-kind", "gaussian",
    ]);
    assert_eq!(code(&check), 2);
}

#[test]
fn tampered_weights_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    let moments = make_fixture(dir.path(), "atoms", 8, &["--count", "4", "--seed", "5"]);
    let cub = dir.path().join("cubature.json");
    let out = run(&[
        "quadrature",
        "--moments", moments.to_str().unwrap(),
        "--d", "3",
        "--mode", "gaussian",
        "--out", cub.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cub).unwrap()).unwrap();
    let w = v["weights"][0].as_f64().unwrap();
    v["weights"][0] = Value::from(w * 1.01);
    std::fs::write(&cub, serde_json::to_string(&v).unwrap()).unwrap();

    let check = run(&[
        "verify",
        "--moments", moments.to_str().unwrap(),
        "--cubature", cub.to_str().unwrap(),
    ]);
    assert_eq!(code(&check), 1);
    let report = stdout_json(&check);
    assert_eq!(report["exactness"]["pass"], false);
}

#[test]
fn missing_input_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let ghost = dir.path().join("missing.json");
    let out = run(&["diagnose", "--moments", ghost.to_str().unwrap(), "--d", "2"]);
    assert_eq!(code(&out), 3);
}
