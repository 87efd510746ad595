//! End-to-end tests of the `solex` binary: report shapes, overrides,
//! determinism and the exit-code contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn solex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf8 stderr")
}

/// Splits a CSV report into rows of fields, header first.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn three_mode_comparison_reports_identical_final_counts() {
    let output = solex(&[
        "--scenario",
        scenario("tiny.json").to_str().unwrap(),
        "--mode",
        "brute,issev1,issev2",
        "--report",
        "csv",
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let rows = csv_rows(&stdout(&output));
    assert_eq!(rows.len(), 4, "header plus one row per mode");
    assert_eq!(rows[0][0], "method");
    assert_eq!((&rows[1][0][..], &rows[1][3][..]), ("brute", "160"));
    assert_eq!(&rows[2][..4], &["issev1", "4", "40", "160"]);
    assert_eq!(&rows[3][..4], &["issev2", "4", "40", "160"]);
}

#[test]
fn oversized_space_is_projected_not_run() {
    let output = solex(&["--scenario", scenario("toolarge.json").to_str().unwrap(), "--mode", "brute"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("brute (projected)"));
    assert!(text.contains("346,275,000"));
    assert!(text.contains("10a 357d 19h 30m 0s"));
}

#[test]
fn top_k_override_bounds_kept_layouts() {
    let output = solex(&[
        "--scenario",
        scenario("tiny.json").to_str().unwrap(),
        "--mode",
        "issev2",
        "--top-k",
        "2",
        "--report",
        "csv",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let rows = csv_rows(&stdout(&output));
    let (p, l): (u64, u64) = (rows[1][1].parse().unwrap(), rows[1][2].parse().unwrap());
    assert_eq!(l, 8);
    assert!(l <= p * 2);
}

#[test]
fn per_eval_cost_override_projects_time() {
    let output = solex(&[
        "--scenario",
        scenario("accounting.json").to_str().unwrap(),
        "--mode",
        "brute",
        "--per-eval-cost",
        "2",
        "--report",
        "csv",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let rows = csv_rows(&stdout(&output));
    assert_eq!(rows[1][10], "40");
    assert_eq!(rows[1][11], "80");
}

#[test]
fn parallel_runs_are_identical() {
    let base = scenario("speedup.json");
    let run = |parallel: &str| {
        let output = solex(&[
            "--scenario",
            base.to_str().unwrap(),
            "--mode",
            "issev2",
            "--seed",
            "7",
            "--parallel",
            parallel,
            "--report",
            "csv",
        ]);
        assert_eq!(output.status.code(), Some(0));
        let text = stdout(&output);
        let rows = csv_rows(&text);
        // Wall-clock columns differ between runs; compare the counts.
        (rows[1][..4].to_vec(), rows[1][10..].to_vec())
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn report_is_written_to_the_requested_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let out = dir.path().join("report.csv");
    let output = solex(&[
        "--scenario",
        scenario("tiny.json").to_str().unwrap(),
        "--mode",
        "issev1",
        "--report",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).is_empty(), "report must go to the file, not stdout");
    let written = std::fs::read_to_string(&out).expect("file exists");
    assert!(written.starts_with("method,"));
}

/// Writes a mutated copy of `tiny.json` and returns its path.
fn mutated_tiny(dir: &Path, mutate: impl FnOnce(&mut serde_json::Value)) -> PathBuf {
    let mut value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(scenario("tiny.json")).unwrap()).unwrap();
    mutate(&mut value);
    let path = dir.join("scenario.json");
    std::fs::write(&path, serde_json::to_string_pretty(&value).unwrap()).unwrap();
    path
}

#[test]
fn infeasible_scenarios_exit_with_one() {
    let dir = tempfile::tempdir().expect("tempdir");

    // Integrated thresholds leave no admissible module for step 0.
    let no_module = mutated_tiny(dir.path(), |v| {
        v["filters"]["standby_module_max_w"] = serde_json::json!(5.0)
    });
    let output = solex(&["--scenario", no_module.to_str().unwrap(), "--mode", "issev2"]);
    assert_eq!(output.status.code(), Some(1), "stderr: {}", stderr(&output));
    assert!(stderr(&output).contains("no admissible module"));

    // Staged thresholds generate candidates but remove them all.
    let no_config = mutated_tiny(dir.path(), |v| {
        v["filters"]["standby_config_max_w"] = serde_json::json!(1.0)
    });
    let output = solex(&["--scenario", no_config.to_str().unwrap(), "--mode", "issev1"]);
    assert_eq!(output.status.code(), Some(1), "stderr: {}", stderr(&output));
    assert!(stderr(&output).contains("empty solution space"));
}

#[test]
fn input_errors_exit_with_two() {
    let output = solex(&["--scenario", "/nonexistent/nowhere.json", "--mode", "brute"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("cannot access"));

    let dir = tempfile::tempdir().expect("tempdir");
    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "not json").unwrap();
    let output = solex(&["--scenario", garbled.to_str().unwrap(), "--mode", "brute"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("cannot parse"));

    let output = solex(&["--scenario", scenario("tiny.json").to_str().unwrap(), "--mode", "warp"]);
    assert_eq!(output.status.code(), Some(2), "clap rejects unknown modes");
    assert!(stderr(&output).contains("unknown mode"));
}
