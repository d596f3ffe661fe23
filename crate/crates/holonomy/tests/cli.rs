//! End-to-end tests of the command-line binary: exit codes, report files,
//! convergence tables, and the no-partial-output guarantee on bad input.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_holonomy"))
}

fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(format!(
        "{}/../../scenarios/{name}.toml",
        env!("CARGO_MANIFEST_DIR")
    ))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

/// A small, fast scenario used where the shipped files would be overkill.
fn fixture(dir: &Path, tolerance_line: &str) -> PathBuf {
    let text = format!(
        r#"
name = "cli-fixture"
crossed_module = "u1-abelian"
seed = 5
tasks = ["stokes"]

[fields.Abar]
family = "landau"
b = 0.25
axis = 1
direction = [1.0]

[fields.A]
family = "landau"
b = 0.25
axis = 1
direction = [1.0]

[fields.B]
family = "flatting"

[geometry.surface]
family = "warp"
amplitude = 0.15

[numerics]
N_t = 40
N_s = 40

[numerics.tolerances]
{tolerance_line}
"#
    );
    let path = dir.join("fixture.toml");
    std::fs::write(&path, text).expect("write fixture");
    path
}

#[test]
fn full_run_passes_and_prints_one_line_per_declared_task() {
    let output = run(&["--config", scenario_path("abelian-square").to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr(&output));
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3, "one line per declared task:\n{text}");
    for (line, task) in lines.iter().zip(["stokes", "tgb", "reparam"]) {
        assert!(line.starts_with(task), "line {line:?} should start with {task}");
        assert!(line.contains("PASS"), "line {line:?} should report PASS");
        assert!(line.contains("residual"), "line {line:?} should show the residual");
    }
}

#[test]
fn subcommand_restricts_the_run_to_one_task() {
    let output = run(&[
        "--config",
        scenario_path("landau").to_str().unwrap(),
        "verify-stokes",
    ]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert_eq!(text.lines().count(), 1, "restricted run prints one line:\n{text}");
    assert!(text.starts_with("stokes"));
    assert!(!text.contains("tgb"));
}

#[test]
fn json_report_has_the_documented_shape() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = dir.path().join("report.json");
    let output = run(&[
        "--config",
        scenario_path("cover-laws").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--quiet",
    ]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr(&output));
    assert!(stdout(&output).is_empty(), "--quiet suppresses stdout");

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).expect("report written"))
            .expect("valid JSON");
    assert_eq!(report["scenario"], "cover-laws");
    assert_eq!(
        report["environment"]["numeric_precision"],
        "IEEE-754 binary64"
    );
    let tasks = report["tasks"].as_array().expect("tasks array");
    assert_eq!(tasks.len(), 2);
    for record in tasks {
        assert!(record["task"].is_string());
        assert!(record["residual"].as_f64().expect("finite residual") >= 0.0);
        assert!(record["tolerance"].as_f64().expect("tolerance") > 0.0);
        assert_eq!(record["pass"], true);
        assert!(record["wall_time_ms"].as_f64().expect("wall time") >= 0.0);
        assert!(record.get("error").is_none() || record["error"].is_null());
    }
}

#[test]
fn reports_are_deterministic_up_to_wall_time() {
    let dir = tempfile::tempdir().expect("tempdir");
    let mut values = Vec::new();
    for name in ["a.json", "b.json"] {
        let out = dir.path().join(name);
        let output = run(&[
            "--config",
            scenario_path("cover-laws").to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--quiet",
        ]);
        assert_eq!(exit_code(&output), 0);
        let mut report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        for record in report["tasks"].as_array_mut().unwrap() {
            record["wall_time_ms"] = 0.0.into();
        }
        values.push(report);
    }
    assert_eq!(values[0], values[1], "same scenario, same seed, same report");
}

#[test]
fn seed_override_changes_sampled_residuals() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = scenario_path("cover-laws");
    let mut residuals = Vec::new();
    for (name, seed_args) in [("default.json", vec![]), ("seeded.json", vec!["--seed", "4242"])] {
        let out = dir.path().join(name);
        let mut args = vec![
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--quiet",
            "check-cm",
        ];
        args.extend(seed_args);
        let output = run(&args);
        assert_eq!(exit_code(&output), 0, "stderr: {}", stderr(&output));
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        residuals.push(report["tasks"][0]["residual"].as_f64().expect("residual"));
    }
    assert_ne!(
        residuals[0], residuals[1],
        "a different seed draws different samples"
    );
}

#[test]
fn failing_task_exits_one_and_still_writes_the_report() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = fixture(dir.path(), "stokes = 1e-12");
    let out = dir.path().join("report.json");
    let output = run(&[
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 1, "unreachable tolerance must fail");
    assert!(stdout(&output).contains("FAIL"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).expect("report still written"))
            .unwrap();
    assert_eq!(report["tasks"][0]["pass"], false);
}

#[test]
fn malformed_scenario_exits_two_with_no_partial_output() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = dir.path().join("bad.toml");
    let good = fixture(dir.path(), "stokes = 1e-6");
    let text = std::fs::read_to_string(&good)
        .unwrap()
        .replace("family = \"landau\"", "family = \"landaux\"");
    std::fs::write(&config, text).unwrap();

    let out = dir.path().join("report.json");
    let output = run(&[
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 2);
    assert!(stderr(&output).contains("landaux"), "stderr names the bad family");
    assert!(!out.exists(), "no partial report on configuration errors");
}

#[test]
fn missing_config_flag_exits_two() {
    let output = run(&["check-cm"]);
    assert_eq!(exit_code(&output), 2);
    assert!(stderr(&output).contains("--config"));
}

#[test]
fn restriction_to_an_unsatisfiable_task_exits_two() {
    // The landau scenario declares no reparametrization map, so restricting
    // to that check must be rejected before anything runs.
    let output = run(&[
        "--config",
        scenario_path("landau").to_str().unwrap(),
        "verify-reparam",
    ]);
    assert_eq!(exit_code(&output), 2);
    assert!(stderr(&output).contains("reparam"));
}

#[test]
fn convergence_writes_csv_and_json_tables() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = fixture(dir.path(), "stokes = 1e-3");
    let csv = dir.path().join("table.csv");
    let out = dir.path().join("table.json");
    let output = run(&[
        "--config",
        config.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "convergence",
        "--n-values",
        "20,40",
    ]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr(&output));

    let table = std::fs::read_to_string(&csv).expect("csv written");
    assert_eq!(stdout(&output), table, "stdout mirrors the CSV file");
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "N,task,residual,slope");
    assert_eq!(lines.len(), 3, "header plus one row per resolution:\n{table}");
    assert!(lines[1].starts_with("20,stokes,"));
    assert!(lines[1].ends_with(','), "slope appears only on the last row");
    assert!(lines[2].starts_with("40,stokes,"));
    let slope: f64 = lines[2]
        .rsplit(',')
        .next()
        .unwrap()
        .parse()
        .expect("fitted slope on the last row");
    assert!(
        (slope - 2.0).abs() < 0.5,
        "quadrature error shrinks at second order, got {slope}"
    );

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).expect("json table");
    assert_eq!(json["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn convergence_rejects_odd_resolutions() {
    let dir = tempfile::tempdir().expect("tempdir");
    let config = fixture(dir.path(), "stokes = 1e-3");
    let output = run(&[
        "--config",
        config.to_str().unwrap(),
        "convergence",
        "--n-values",
        "20,41",
    ]);
    assert_eq!(exit_code(&output), 2);
    assert!(stderr(&output).contains("41"), "stderr names the bad resolution");
}

#[test]
fn demo_halfpath_prints_both_gaps_and_writes_json() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = dir.path().join("halfpath.json");
    let output = run(&[
        "--config",
        scenario_path("abelian-square").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "demo-halfpath",
    ]);
    assert_eq!(exit_code(&output), 0, "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("lower half"), "narrative mentions the lower half:\n{text}");
    assert!(text.contains("surface class"), "narrative mentions the surface class");

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["scenario"], "abelian-square");
    let c_gap = json["c_gap"].as_f64().expect("c_gap");
    let h_gap = json["h_gap"].as_f64().expect("h_gap");
    assert!(c_gap >= 0.0 && c_gap.is_finite());
    assert!(h_gap >= 0.0 && h_gap.is_finite());
    // With the curvature-cancelling two-form the path-space transport barely
    // notices the cut, while the surface class keeps the lower half's share.
    assert!(c_gap < 1e-4, "fake-flat transport gap should be tiny, got {c_gap}");
    assert!(h_gap > 1e-3, "surface class gap should be visible, got {h_gap}");
}
