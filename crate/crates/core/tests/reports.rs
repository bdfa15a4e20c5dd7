use beltrami_lab::experiment::{emit_report, run_suite, ExperimentConfig, Suite};

const CONFIG: &str = r#"{
    "suite": "apriori-sweep",
    "grid": { "points_per_axis": 64, "half_width": 4.0 },
    "family": { "kind": "random_bandlimited", "k": 0.4, "seed": 99, "count": 2 },
    "params": { "alpha": [0.6], "p": [1.5, 2.5] }
}"#;

#[test]
fn config_json_round_trips() {
    let config = ExperimentConfig::from_json(CONFIG).unwrap();
    let text = serde_json::to_string(&config).unwrap();
    assert_eq!(ExperimentConfig::from_json(&text).unwrap(), config);
    assert_eq!(config.suite, Suite::AprioriSweep);
    assert!(ExperimentConfig::from_json(&CONFIG.replace("\"count\"", "\"bogus\"")).is_err());
}

#[test]
fn seeded_runs_are_reproducible_and_rewrite_in_place() {
    let config = ExperimentConfig::from_json(CONFIG).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let first = run_suite(&config).unwrap();
    assert!(first.passed);
    assert_eq!(first.configured.len(), 2);
    let written = emit_report(&first, dir.path(), false).unwrap();
    let json = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let second = run_suite(&config).unwrap();
    assert_eq!(emit_report(&second, dir.path(), false).unwrap(), written);
    assert_eq!(
        std::fs::read_to_string(dir.path().join("report.json")).unwrap(),
        json
    );

    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed["criteria"][0]["id"], 9);
    let ratios = parsed["configured"][0]["apriori"].as_array().unwrap();
    assert_eq!(ratios.len(), 2);
    assert!(ratios
        .iter()
        .all(|r| r["ratio"].as_f64().unwrap().is_finite()));
}
