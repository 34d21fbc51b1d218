use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qwire(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwire"))
        .args(args)
        .env_remove("QWIRE_JOBS")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qwire-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stderr_error(out: &Output) -> Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    let line = text.lines().last().expect("an error line");
    serde_json::from_str::<Value>(line).expect("single-line JSON")["error"].clone()
}

fn resolved(out: &Output) -> Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    let line = text.lines().next().expect("resolved scenario echo");
    serde_json::from_str::<Value>(line).unwrap()["resolved"].clone()
}

#[test]
fn steady_reports_all_methods() {
    let out = qwire(&["steady", "--scenario", "fig1a", "--k", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["spec_version"], 1);
    let methods = doc["methods"].as_array().unwrap();
    let names: Vec<&str> = methods
        .iter()
        .map(|m| m["method"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["global", "local", "redfield", "exact"]);
    let q_exact = methods[3]["heat_currents"]["hot"].as_f64().unwrap();
    let q_global = methods[0]["heat_currents"]["hot"].as_f64().unwrap();
    assert!(q_exact > 0.0 && (q_global / q_exact - 1.0).abs() < 1e-3);
    assert_eq!(resolved(&out)["scenario"]["params"]["k"], 0.01);
}

#[test]
fn flags_override_config_which_overrides_preset() {
    let cfg = scratch(
        "precedence.conf",
        "scenario = fig1a\nlambda_sq = 1e-3\nk = 0.05\n",
    );
    let out = qwire(&[
        "steady",
        "--config",
        cfg.to_str().unwrap(),
        "--lambda-sq",
        "1e-2",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let p = &resolved(&out)["scenario"]["params"];
    assert_eq!(p["lambda_sq"], 1e-2);
    assert_eq!(p["k"], 0.05);
    assert_eq!(p["omega_h"], 2.0);

    let empty = scratch("empty.conf", "");
    let out = qwire(&[
        "steady",
        "--config",
        empty.to_str().unwrap(),
        "--omega-c",
        "1",
        "--omega-h",
        "1.5",
        "--k",
        "0.1",
        "--t-c",
        "1",
        "--t-h",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(resolved(&out)["scenario"]["params"]["omega_h"], 1.5);
}

#[test]
fn malformed_config_line_is_named() {
    let cfg = scratch(
        "bad.conf",
        "k = 1\nt_c = 2\n\n# c\nt_h = 3\nomega_c = 1\nthis line is broken\n",
    );
    let out = qwire(&["steady", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_error(&out);
    assert!(err["message"].as_str().unwrap().contains("line 7"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["steady", "--bogus"],
        vec!["steady", "--scenario", "fig9"],
        vec!["steady", "--scenario", "fig1a", "--k", "-1"],
        vec!["steady", "--omega-c", "1"],
        vec!["sweep", "--scenario", "fig1a", "--log-grid", "1:2"],
    ] {
        let out = qwire(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert_eq!(stderr_error(&out)["code"], 1);
    }
}

#[test]
fn validate_passes_at_equilibrium() {
    let out = qwire(&["validate", "--scenario", "fig1a", "--t-h", "2"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}

#[test]
fn sweep_csv_is_deterministic_across_workers() {
    let run = |jobs: &str| {
        qwire(&[
            "sweep",
            "--scenario",
            "fig1c",
            "--log-grid",
            "1e-4:1:8",
            "--jobs",
            jobs,
        ])
    };
    let one = run("1");
    let four = run("4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);

    let text = String::from_utf8(one.stdout).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 28);
    assert_eq!(header[0], "k");
    let col = header.iter().position(|&c| c == "lme_qdot_h").unwrap();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 8);
    for r in &rows {
        assert_eq!(r.len(), 28);
        assert!(r[col].contains('e'));
        assert!(r[col].parse::<f64>().unwrap() < 0.0);
    }
}

#[test]
fn sweep_writes_output_file_and_reads_env_jobs() {
    let path = std::env::temp_dir().join(format!("qwire-cli-{}-out.csv", std::process::id()));
    let out = Command::new(env!("CARGO_BIN_EXE_qwire"))
        .args([
            "sweep",
            "--scenario",
            "fig2c",
            "--grid",
            "10,1000",
            "-o",
            path.to_str().unwrap(),
        ])
        .env("QWIRE_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.ends_with('\n'));
}

#[test]
fn scenarios_lists_every_preset() {
    let out = qwire(&["scenarios"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "fig2c",
    ] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}
