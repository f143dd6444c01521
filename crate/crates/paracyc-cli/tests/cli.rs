//! End-to-end tests of the command-line driver: exit-code contract,
//! job-document input, output formats, and determinism of reports.

use assert_cmd::Command;
use serde_json::Value;

fn paracyc() -> Command {
    Command::cargo_bin("paracyc").unwrap()
}

fn report_of(args: &[&str]) -> (Value, i32) {
    let out = paracyc().args(args).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).expect("report is JSON");
    (v, out.status.code().unwrap())
}

#[test]
fn forms_suite_passes_and_exits_zero() {
    let (report, code) = report_of(&[
        "verify-forms",
        "--group",
        "cyclic(2)",
        "--algebra",
        "scalars",
        "--level",
        "4",
    ]);
    assert_eq!(code, 0);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["exit"], 0);
    let checks = report["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert_eq!(c["status"], "pass");
        assert!(c["anchor"].as_str().is_some_and(|a| !a.is_empty()));
    }
}

#[test]
fn invalid_input_exits_two() {
    paracyc()
        .args(["hpg", "--group", "cyclic(0)", "--algebra", "scalars"])
        .assert()
        .code(2);
    paracyc()
        .args(["no-such-command", "--algebra", "scalars"])
        .assert()
        .code(2);
    paracyc()
        .args(["hpg", "--group", "trivial", "--algebra", "mystery"])
        .assert()
        .code(2);
    paracyc()
        .args(["hpg", "--group", "trivial", "--algebra", "scalars", "--level", "1"])
        .assert()
        .code(2);
}

#[test]
fn job_document_drives_a_run() {
    let dir = tempdir();
    let spec = dir.join("job.json");
    std::fs::write(
        &spec,
        r#"{"command": "hpg", "group": "cyclic(2)", "algebra": "scalars", "level": 4}"#,
    )
    .unwrap();
    let out = paracyc().arg("--spec").arg(&spec).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["homology"]["dims"][1], serde_json::json!([2, 0]));
    assert_eq!(v["comparison"]["agree"], true);
}

#[test]
fn inline_structure_constants_are_accepted() {
    let dir = tempdir();
    let spec = dir.join("job.json");
    // A two-dimensional algebra of dual numbers given inline: e0 is the
    // unit, e1 squares to zero.
    std::fs::write(
        &spec,
        r#"{
            "command": "verify-forms",
            "group": "trivial",
            "algebra": {
                "labels": ["one", "eps"],
                "structure": [
                    [0, 0, 0, 1, 1],
                    [0, 1, 1, 1, 1],
                    [1, 0, 1, 1, 1]
                ],
                "unit": [[0, 1, 1]]
            },
            "level": 3
        }"#,
    )
    .unwrap();
    paracyc().arg("--spec").arg(&spec).assert().code(0);
}

#[test]
fn malformed_structure_constants_exit_two() {
    let dir = tempdir();
    let spec = dir.join("job.json");
    std::fs::write(
        &spec,
        r#"{
            "command": "verify-forms",
            "group": "trivial",
            "algebra": {"labels": ["x"], "structure": [[0, 0, 5, 1, 1]]},
            "level": 3
        }"#,
    )
    .unwrap();
    paracyc().arg("--spec").arg(&spec).assert().code(2);
}

fn strip_timing(v: &mut Value) {
    if let Some(map) = v.as_object_mut() {
        map.remove("timing_ms");
        for (_, val) in map.iter_mut() {
            strip_timing(val);
        }
    } else if let Some(arr) = v.as_array_mut() {
        for val in arr {
            strip_timing(val);
        }
    }
}

#[test]
fn repeated_runs_are_identical_modulo_timing() {
    let args = [
        "hpg",
        "--group",
        "cyclic(2)",
        "--algebra",
        "scalars",
        "--level",
        "4",
    ];
    let (mut a, _) = report_of(&args);
    let (mut b, _) = report_of(&args);
    strip_timing(&mut a);
    strip_timing(&mut b);
    // Byte-level comparison of the canonical rendering.
    assert_eq!(
        serde_json::to_vec(&a).unwrap(),
        serde_json::to_vec(&b).unwrap()
    );
}

#[test]
fn csv_format_and_output_file() {
    let dir = tempdir();
    let out_path = dir.join("report.csv");
    paracyc()
        .args([
            "verify-forms",
            "--group",
            "trivial",
            "--algebra",
            "dual-numbers",
            "--level",
            "3",
            "--format",
            "csv",
            "--output",
        ])
        .arg(&out_path)
        .assert()
        .code(0);
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("kind,name,detail,status"));
    assert!(text.contains(",pass"));
}

#[test]
fn list_builtins_mentions_all_commands() {
    let out = paracyc().arg("--list-builtins").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let cmds = v["commands"].as_array().unwrap();
    assert!(cmds.iter().any(|c| c == "hpg"));
    assert!(cmds.iter().any(|c| c == "dual-greenjulg"));
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "paracyc-cli-test-{}-{:?}",
        std::process::id(),
        std::thread::current().id()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
