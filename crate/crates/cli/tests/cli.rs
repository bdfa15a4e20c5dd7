use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_beltrami-lab"));
    cmd.args(args).env_remove("BELTRAMI_LAB_OUT");
    if let Some(dir) = env_out {
        cmd.env("BELTRAMI_LAB_OUT", dir);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const ZERO_SOLVE: &str = r#"{
    "suite": "solve",
    "grid": { "points_per_axis": 32, "half_width": 4.0 },
    "family": { "kind": "smooth_bump", "k": 0.0 },
    "write_fields": true
}"#;

#[test]
fn unknown_suite_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), ZERO_SOLVE);
    let out = run(&["run", "--config", &config, "--suite", "bogus"], None);
    assert_eq!(out.status.code(), Some(2));
    let config = write_config(dir.path(), &ZERO_SOLVE.replace("\"solve\"", "\"bogus\""));
    assert_eq!(
        run(&["run", "--config", &config], None).status.code(),
        Some(2)
    );
}

#[test]
fn invalid_inputs_are_usage_errors_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out_arg = out_dir.to_str().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(
        run(&["run", "--config", missing.to_str().unwrap()], None)
            .status
            .code(),
        Some(2)
    );
    let config = write_config(dir.path(), ZERO_SOLVE);
    assert_eq!(
        run(&["run", "--config", &config, "--grid", "32"], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(
            &["run", "--config", &config, "--grid", "33,4", "--out", out_arg],
            None
        )
        .status
        .code(),
        Some(2)
    );
    let bad_k = write_config(dir.path(), &ZERO_SOLVE.replace("\"k\": 0.0", "\"k\": 1.0"));
    assert_eq!(
        run(&["run", "--config", &bad_k, "--out", out_arg], None)
            .status
            .code(),
        Some(2)
    );
    let unseeded = write_config(
        dir.path(),
        &ZERO_SOLVE.replace("smooth_bump", "random_bandlimited"),
    );
    assert_eq!(
        run(&["run", "--config", &unseeded, "--out", out_arg], None)
            .status
            .code(),
        Some(2)
    );
    assert!(!out_dir.exists());
    assert_eq!(run(&[], None).status.code(), Some(2));
}

#[test]
fn zero_coefficient_solve_gives_identity_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), ZERO_SOLVE);
    let out_dir = dir.path().join("env-out");
    let first = run(&["run", "--config", &config], Some(&out_dir));
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let report_path = out_dir.join("report.json");
    let text = fs::read_to_string(&report_path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["passed"], true);
    let member = &report["configured"][0];
    assert_eq!(member["displacement_sup"], 0.0);
    assert_eq!(member["sup_bound"], 0.0);
    assert!(out_dir.join("run_member0_dphi.cfld").exists());

    // CSV files carry exactly two columns.
    for entry in fs::read_dir(&out_dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "csv") {
            for line in fs::read_to_string(&path).unwrap().lines() {
                assert_eq!(line.split(',').count(), 2, "{}", path.display());
            }
        }
    }

    let second = run(
        &[
            "run",
            "--config",
            &config,
            "--out",
            out_dir.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&report_path).unwrap(), text);
}
