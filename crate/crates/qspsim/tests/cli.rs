use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qspsim(args: &[&str]) -> Output {
    qspsim_env(args, &[])
}

fn qspsim_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qspsim"));
    cmd.args(args).env_remove("QSPSIM_JOBS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stderr(out)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const TWO_QUBIT: &str = r#"{"n": 2, "d": 2, "hermitize": true, "entries": [
    [0, 0, 0.5, 0], [1, 1, -0.25, 0], [2, 2, 0.1, 0], [3, 3, -0.7, 0],
    [0, 1, 0.3, 0.2], [2, 3, -0.4, 0.1]]}"#;

#[test]
fn phases_reference_point() {
    let out = qspsim(&["phases", "--tau", "1", "--eps", "1e-3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json_stdout(&out);
    assert_eq!(v["phases"].as_array().unwrap().len(), 10);
    assert_eq!(v["plan"]["q"], 6);
    assert_eq!(v["plan"]["N"], 10);
    assert!(v["diagnostics"]["gap_final"].as_f64().unwrap() <= 8e-3);
}

#[test]
fn simulate_zero_time() {
    let dir = TempDir::new().unwrap();
    let h = write(dir.path(), "h.json", TWO_QUBIT);
    let out = qspsim(&["simulate", "--hamiltonian", &h, "--time", "0", "--eps", "1e-3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json_stdout(&out);
    assert_eq!(v["N"], 0);
    assert!(v["trace_distance"].as_f64().unwrap() <= 1e-10);
    assert!((v["success_prob_min"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn simulate_writes_report_file() {
    let dir = TempDir::new().unwrap();
    let h = write(dir.path(), "h.json", TWO_QUBIT);
    let report = dir.path().join("report.json");
    let out = qspsim(&[
        "simulate",
        "--hamiltonian",
        &h,
        "--time",
        "1.5",
        "--eps",
        "1e-4",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(v["trace_distance"].as_f64().unwrap() <= 8e-4);
    assert!(v["success_prob_min"].as_f64().unwrap() >= 1.0 - 16e-4);
    assert!(v["wall_time_s"].as_f64().unwrap() > 0.0);
}

#[test]
fn sweep_grid_has_45_rows_within_bounds() {
    let dir = TempDir::new().unwrap();
    let csv_path = dir.path().join("sweep.csv");
    let out = qspsim(&[
        "sweep",
        "--tau-list",
        "1,2,5",
        "--eps-list",
        "1e-2,1e-4,1e-6",
        "--trials",
        "5",
        "--seed",
        "3",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(str::to_owned).collect();
    assert_eq!(
        header,
        [
            "tau",
            "eps_target",
            "q",
            "N",
            "q_lower",
            "gap_fourier",
            "trace_distance",
            "success_prob_min",
            "wall_time_s"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 45);
    for row in &rows {
        let eps: f64 = row[1].parse().unwrap();
        let dist: f64 = row[6].parse().unwrap();
        let success: f64 = row[7].parse().unwrap();
        assert!(dist <= 8.0 * eps, "{row:?}");
        assert!(success >= 1.0 - 16.0 * eps, "{row:?}");
    }
}

/// Everything but the timing column.
fn sweep_without_timing(args: &[&str], env: &[(&str, &str)]) -> Vec<String> {
    let out = qspsim_env(args, env);
    assert!(out.status.success(), "{}", stderr(&out));
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| l.rsplit_once(',').unwrap().0.to_owned())
        .collect()
}

#[test]
fn sweep_is_deterministic_across_job_counts() {
    let args = [
        "sweep",
        "--tau-list",
        "1.5,3",
        "--eps-list",
        "1e-3",
        "--trials",
        "3",
        "--seed",
        "9",
    ];
    let one = sweep_without_timing(&[&args[..], &["--jobs", "1"]].concat(), &[]);
    let three = sweep_without_timing(&args, &[("QSPSIM_JOBS", "3")]);
    assert_eq!(one.len(), 7);
    assert_eq!(one, three);
    let other_seed = sweep_without_timing(
        &[
            "sweep",
            "--tau-list",
            "1.5,3",
            "--eps-list",
            "1e-3",
            "--trials",
            "3",
            "--seed",
            "10",
        ],
        &[],
    );
    assert_ne!(one, other_seed);
}

#[test]
fn bad_jobs_env_is_reported() {
    let out = qspsim_env(&["bessel", "--tau", "1"], &[("QSPSIM_JOBS", "many")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("QSPSIM_JOBS"));
    // A flag makes the variable irrelevant.
    let out = qspsim_env(&["bessel", "--tau", "1", "--jobs", "1"], &[("QSPSIM_JOBS", "many")]);
    assert!(out.status.success());
}

#[test]
fn walk_check_passes() {
    let dir = TempDir::new().unwrap();
    let h = write(dir.path(), "h.json", TWO_QUBIT);
    let out = qspsim(&["walk-check", "--hamiltonian", &h]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json_stdout(&out);
    assert!(v["max_deviation"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["predicted"].as_array().unwrap().len(), 4);
}

#[test]
fn bessel_values() {
    let out = qspsim(&["bessel", "--tau", "1", "--kmax", "3"]);
    assert!(out.status.success());
    let v = json_stdout(&out);
    let values = v["values"].as_array().unwrap();
    assert_eq!(values.len(), 4);
    assert!((values[0].as_f64().unwrap() - 0.765_197_686_557_966_6).abs() < 1e-15);
}

#[test]
fn config_file_with_flag_override() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "run.json",
        r#"{"command": "phases", "tau": 3.0, "eps": 1e-3}"#,
    );
    let out = qspsim(&["--config", &cfg]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(json_stdout(&out)["plan"]["tau"], 3.0);

    let out = qspsim(&["--config", &cfg, "phases", "--tau", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json_stdout(&out);
    assert_eq!(v["plan"]["tau"], 1.0);
    assert_eq!(v["phases"].as_array().unwrap().len(), 10);
}

fn expect_error(args: &[&str], needle: &str) {
    let out = qspsim(args);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains(needle), "expected {needle:?} in {}", stderr(&out));
}

#[test]
fn hamiltonian_file_errors() {
    let dir = TempDir::new().unwrap();
    let range = write(
        dir.path(),
        "range.json",
        r#"{"n":1,"d":1,"entries":[[0,0,1,0],[4,4,1,0]]}"#,
    );
    expect_error(
        &["walk-check", "--hamiltonian", &range],
        "parse error: index out of range",
    );

    let herm = write(
        dir.path(),
        "herm.json",
        r#"{"n":1,"d":2,"entries":[[0,1,1,0],[1,0,0.5,0]]}"#,
    );
    expect_error(&["walk-check", "--hamiltonian", &herm], "not Hermitian");

    let sparse = write(
        dir.path(),
        "sparse.json",
        r#"{"n":1,"d":1,"hermitize":true,"entries":[[0,0,1,0],[0,1,1,0]]}"#,
    );
    expect_error(
        &["simulate", "--hamiltonian", &sparse, "--time", "1", "--eps", "0.01"],
        "sparsity exceeded",
    );

    let broken = write(
        dir.path(),
        "broken.json",
        "{\"n\": 1,\n \"d\": 1,\n \"entries\": [[0, 0, true, 0]]}",
    );
    expect_error(&["walk-check", "--hamiltonian", &broken], "line 3");
    expect_error(&["walk-check", "--hamiltonian", &broken], "entries[0]");

    expect_error(&["walk-check", "--hamiltonian", "/nonexistent/h.json"], "cannot read");
}

#[test]
fn missing_arguments() {
    expect_error(&["phases", "--tau", "1"], "phases requires eps");
    expect_error(
        &["simulate", "--time", "1", "--eps", "0.1"],
        "simulate requires hamiltonian",
    );
    expect_error(&[], "no command given");
    expect_error(&["phases", "--tau", "1", "--eps", "2"], "invalid eps");
}

#[test]
fn too_long_sequence_is_an_error() {
    expect_error(&["phases", "--tau", "40", "--eps", "1e-6"], "N cap exceeded");
}
