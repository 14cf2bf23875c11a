use std::path::Path;
use std::process::{Command, Output};

use stokes_cli::{Report, Status};

const CANONICAL: &str = r#""params": {"alpha": [[0, 0], [0.25, 0], [-0.5, 0]], "beta": [[0, 0], [3, 0], [1, 1]]}"#;

fn run(dir: &Path, sub: &str, config: &str, extra: &[&str]) -> Output {
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_stokes"))
        .arg(sub)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap()
}

fn report(dir: &Path) -> Report {
    Report::read(&dir.join("out/report.json")).unwrap()
}

#[test]
fn integer_triple_reports_vanishing_pair_multipliers() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"name": "ints", "params": {"alpha": [[0, 0], [-3, 0], [-5, 0]], "beta": [[0, 0], [3, 0], [1, 1]]}, "tasks": ["stokes"]}"#;
    let out = run(dir.path(), "compute", config, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(dir.path());
    let data = r.scenarios[0].stokes.as_ref().unwrap();
    assert_eq!(data.mu[0].norm(), 0.0);
    assert_eq!(data.mu[2].norm(), 0.0);
    let json = std::fs::read_to_string(dir.path().join("out/report.json")).unwrap();
    assert!(json.contains("triple_a2_a1_other"));
}

#[test]
fn excluded_case_exits_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let config =
        r#"{"name": "log", "params": {"alpha": [[0, 0], [0.25, 0], [0.25, 0]], "beta": [[0, 0], [3, 0], [1, 1]]}}"#;
    let out = run(dir.path(), "verify", config, &[]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("excluded logarithmic case") && err.contains("a3-a2 in Z>=-1"), "{err}");
    assert_eq!(report(dir.path()).scenarios[0].status, Status::Unsupported);
}

#[test]
fn canonical_scenario_passes() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!(
        r#"{{"name": "canonical", {CANONICAL}, "rays": [1.6], "x_samples": [[0.0, 0.05], [0.01, 0.07]],
            "tasks": ["stokes", "gevrey", "residual"]}}"#
    );
    let out = run(dir.path(), "verify", &config, &["--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(dir.path());
    assert!(r.scenarios[0].checks.iter().all(|c| c.pass));
    let csv = std::fs::read_to_string(dir.path().join("out/tables.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("name,expected,measured,abs_err,rel_err,pass"));
    let names: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(names.len(), 27);
    assert!(names.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn measured_mismatch_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!(r#"{{"name": "canonical", {CANONICAL}, "tasks": ["verify"]}}"#);
    let out = run(dir.path(), "verify", &config, &[]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(dir.path());
    let failed: Vec<&str> = r.scenarios[0].checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    assert_eq!(failed, ["canonical/verify/mu2"]);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), "verify", "{not json", &[]);
    assert_eq!(out.status.code(), Some(2));
    let config = format!(r#"{{"name": "a", {CANONICAL}, "tasks": ["residual"]}}"#);
    assert_eq!(run(dir.path(), "verify", &config, &[]).status.code(), Some(2));
    let out = run(dir.path(), "verify", &format!(r#"{{"name": "a", {CANONICAL}}}"#), &["--tol-quad", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let config = format!(
        r#"{{"scenarios": [
            {{"name": "b", {CANONICAL}, "x_samples": [[0.03, 0.04]], "tasks": ["stokes", "residual"]}},
            {{"name": "a", "params": {{"alpha": [[0, 0], [0.3, 0], [-1.7, 0]], "beta": [[0, 0], [3, 0], [1, 1]]}},
              "x_samples": [[0.03, 0.04]], "tasks": ["stokes", "gevrey"]}}
        ]}}"#
    );
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    assert_eq!(run(d1.path(), "verify", &config, &["--jobs", "1"]).status.code(), Some(0));
    assert_eq!(run(d2.path(), "verify", &config, &["--jobs", "2"]).status.code(), Some(0));
    for file in ["report.json", "tables.csv"] {
        let a = std::fs::read(d1.path().join("out").join(file)).unwrap();
        let b = std::fs::read(d2.path().join("out").join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
    let r = report(d1.path());
    assert_eq!(r.scenarios.iter().map(|s| s.name.as_str()).collect::<Vec<_>>(), ["a", "b"]);
    let text = std::fs::read_to_string(d1.path().join("out/report.json")).unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", text);
    let again: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(again, r);
}
