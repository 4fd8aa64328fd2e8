//! End-to-end tests of the `enantiodyne` binary: argument surface, output
//! formats, determinism of file output, and the JSON-on-stderr error
//! contract.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_enantiodyne"))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn config_path() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs/propanediol_fig2a.cfg")
        .to_string_lossy()
        .into_owned()
}

#[test]
fn help_matches_golden_file() {
    let output = run(&["--help"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), include_str!("golden/help.txt"));
}

#[test]
fn subcommand_help_lists_shared_options() {
    for subcommand in ["simulate", "detect", "analytics", "sweep", "montecarlo"] {
        let text = stdout(&run(&[subcommand, "--help"]));
        for flag in ["--config", "--model", "--seed", "--tolerance", "--out"] {
            assert!(text.contains(flag), "{subcommand} --help lacks {flag}");
        }
    }
    let text = stdout(&run(&["sweep", "--help"]));
    for flag in ["--kind", "--nm", "--lambdas", "--speeds", "--target-snr", "--jobs"] {
        assert!(text.contains(flag), "sweep --help lacks {flag}");
    }
}

#[test]
fn design_cavity_emits_three_rows_idempotently() {
    let first = run(&["design-cavity"]);
    let second = run(&["design-cavity"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "output differs between runs");
    let text = stdout(&first);
    let data_rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("q,"))
        .collect();
    assert_eq!(data_rows.len(), 3);
    assert!(data_rows[0].starts_with("0,3.460971,"));
    assert!(data_rows[2].starts_with("2,72.811000,"));
}

#[test]
fn esst_reports_orthogonal_outcomes() {
    let output = run(&["esst"]);
    assert!(output.status.success());
    let report: Value = serde_json::from_str(&stdout(&output)).expect("valid JSON");
    let outcomes = report["outcomes"].as_array().expect("outcomes array");
    assert_eq!(outcomes.len(), 2);
    for outcome in outcomes {
        let populations = outcome["final_state"]["populations"]
            .as_array()
            .expect("populations");
        let total: f64 = populations.iter().map(|p| p.as_f64().unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12, "populations must sum to 1");
    }
    // At the default φ = −π/2 the left enantiomer lands in level 3 and the
    // right in level 2, giving opposite probe inversions.
    assert_eq!(outcomes[0]["sigma_z0"].as_f64(), Some(1.0));
    assert_eq!(outcomes[1]["sigma_z0"].as_f64(), Some(-1.0));
}

#[test]
fn simulate_writes_deterministic_trajectory() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    let config = config_path();
    let first = run(&[
        "simulate",
        "--config",
        &config,
        "--hypothesis",
        "left",
        "--out",
        out_a.to_str().unwrap(),
    ]);
    let second = run(&[
        "simulate",
        "--config",
        &config,
        "--hypothesis",
        "left",
        "--out",
        out_b.to_str().unwrap(),
    ]);
    assert!(first.status.success());
    let bytes_a = std::fs::read(&out_a).expect("first file");
    let bytes_b = std::fs::read(&out_b).expect("second file");
    assert_eq!(bytes_a, bytes_b, "trajectory must be bit-identical across runs");
    assert_eq!(first.stdout, bytes_a, "stdout and --out must carry the same bytes");
    assert_eq!(
        stdout(&second).lines().filter(|l| !l.starts_with('#')).count(),
        8002, // header row + 8001 samples
    );
}

#[test]
fn detect_reports_reference_snr() {
    let output = run(&["detect", "--config", &config_path()]);
    assert!(output.status.success());
    let report: Value = serde_json::from_str(&stdout(&output)).expect("valid JSON");
    let snr = report["snr"].as_f64().expect("snr field");
    assert!((snr - 5.4301).abs() / 5.4301 < 1e-3, "snr = {snr}");
    assert!(report["gaussian_valid"].is_null()); // nested under window
    assert_eq!(report["window"]["gaussian_valid"].as_bool(), Some(true));
    let n_l = report["n_bar_left"].as_f64().unwrap();
    let n_r = report["n_bar_right"].as_f64().unwrap();
    assert!(n_l > 0.0 && n_r < 0.0, "windowed counts must have opposite signs");
}

#[test]
fn analytics_reports_dispersive_block() {
    let output = run(&["analytics", "--config", &config_path()]);
    assert!(output.status.success());
    let report: Value = serde_json::from_str(&stdout(&output)).expect("valid JSON");
    assert_eq!(report["dispersive"]["valid"].as_bool(), Some(true));
    let m_star = report["dispersive"]["optimal_window"].as_f64().unwrap();
    assert!((0.69..=0.71).contains(&m_star));
    let phase_l = report["dispersive"]["phase_left_rad"].as_f64().unwrap();
    let phase_r = report["dispersive"]["phase_right_rad"].as_f64().unwrap();
    assert!((phase_l + phase_r).abs() < 1e-15, "phases must be antisymmetric");
}

#[test]
fn sweep_snr_vs_nm_emits_csv() {
    let output = run(&[
        "sweep",
        "--config",
        &config_path(),
        "--kind",
        "snr-vs-nm",
        "--nm",
        "100,500",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    let data_rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("n_m,"))
        .collect();
    assert_eq!(data_rows.len(), 2);
    assert!(text.contains("# config_hash = 0x"));
    assert!(text.contains("n_m,snr,n_bar_l,n_bar_r,p_err,sigma_z_excursion"));
}

#[test]
fn sweep_rejects_unknown_kind() {
    let output = run(&["sweep", "--config", &config_path(), "--kind", "bogus"]);
    assert!(!output.status.success());
    let error: Value = serde_json::from_str(stderr(&output).trim()).expect("JSON error");
    assert!(error["error"].as_str().unwrap().contains("bogus"));
}

#[test]
fn montecarlo_runs_requested_shots() {
    let output = run(&["montecarlo", "--config", &config_path(), "--shots", "1000"]);
    assert!(output.status.success());
    let report: Value = serde_json::from_str(&stdout(&output)).expect("valid JSON");
    assert_eq!(report["shots_per_hypothesis"].as_u64(), Some(1000));
    assert_eq!(report["seed"].as_u64(), Some(2026));
    assert_eq!(report["consistent_within_3_se"].as_bool(), Some(true));
}

#[test]
fn missing_config_yields_json_error() {
    let output = run(&["detect", "--config", "/no/such/file.cfg"]);
    assert!(!output.status.success());
    let error: Value = serde_json::from_str(stderr(&output).trim()).expect("JSON error");
    assert!(error["error"].is_string());
    assert!(stdout(&output).is_empty(), "errors must not pollute stdout");
}

#[test]
fn invalid_config_yields_json_error() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("broken.cfg");
    std::fs::write(&path, "[drive]\nlambda = 0.01\n").expect("write config");
    let output = run(&["detect", "--config", path.to_str().unwrap()]);
    assert!(!output.status.success());
    let error: Value = serde_json::from_str(stderr(&output).trim()).expect("JSON error");
    assert!(error["error"].as_str().unwrap().contains("delta_m"));
}

#[test]
fn check_reports_all_criteria_and_known_failures() {
    let output = run(&["check"]);
    assert_eq!(output.status.code(), Some(1), "two criteria fail by design");
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("criterion ")).collect();
    assert_eq!(lines.len(), 11);
    for (i, line) in lines.iter().enumerate() {
        assert!(line.starts_with(&format!("criterion {:02} ", i + 1)), "bad order: {line}");
    }
    assert!(lines[2].contains("[FAIL]"), "criterion 03 should fail: {}", lines[2]);
    assert!(lines[9].contains("[FAIL]"), "criterion 10 should fail: {}", lines[9]);
    let passes = lines.iter().filter(|l| l.contains("[PASS]")).count();
    assert_eq!(passes, 9);
}

#[test]
fn out_dir_environment_variable_supplies_default_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let output = binary()
        .args(["design-cavity"])
        .env("ENANTIODYNE_OUT_DIR", dir.path())
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    let mirrored = std::fs::read(dir.path().join("cavity_designs.csv")).expect("default file");
    assert_eq!(output.stdout, mirrored);
}

#[test]
fn explicit_out_overrides_environment_directory() {
    let dir = tempfile::tempdir().expect("tempdir");
    let explicit = dir.path().join("chosen.csv");
    let output = binary()
        .args(["design-cavity", "--out", explicit.to_str().unwrap()])
        .env("ENANTIODYNE_OUT_DIR", dir.path())
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    assert!(explicit.exists(), "--out file must be written");
    assert!(
        !dir.path().join("cavity_designs.csv").exists(),
        "--out must suppress the environment default"
    );
}
