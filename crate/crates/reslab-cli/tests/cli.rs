//! End-to-end runs of the `reslab` binary: output shapes, frozen values on a
//! two-vertex edge, exit codes, and byte-level determinism of reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_reslab"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn stdout_str(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_str(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("process not signaled")
}

fn value(o: &Output) -> f64 {
    stdout_str(o).trim().parse().expect("stdout is one number")
}

/// `E(f) = |f(x) - f(y)|^2`: resistance 1, Orlicz gauge twice the Luxemburg.
const EDGE: &str = r#"{
  "vertices": ["x", "y"],
  "edges": [{"u": "x", "v": "y", "w": {"kind": "power", "c": 2.0, "p": 2.0}}]
}"#;

/// Quadratic 3-cycle, two free coordinates after gauge fixing.
const CYCLE: &str = r#"{
  "vertices": ["a", "b", "c"],
  "edges": [
    {"u": "a", "v": "b", "w": {"kind": "power", "c": 2.0, "p": 2.0}},
    {"u": "b", "v": "c", "w": {"kind": "power", "c": 1.0, "p": 2.0}},
    {"u": "c", "v": "a", "w": {"kind": "power", "c": 0.5, "p": 2.0}}
  ]
}"#;

/// One edge plus an isolated vertex: infinite entries off the edge.
const SPLIT: &str = r#"{
  "vertices": ["a", "b", "z"],
  "edges": [{"u": "a", "v": "b", "w": {"kind": "power", "c": 1.0, "p": 2.0}}]
}"#;

#[test]
fn pair_resistance_json() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "edge.json", EDGE);
    let out = bin().arg("resistance").arg(&file).args(["--pair", "x,y"]).output().unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr_str(&out));
    assert!((value(&out) - 1.0).abs() <= 1e-6);
}

#[test]
fn identified_pair_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "ident.json",
        r#"{
          "vertices": ["x", "y", "z"],
          "edges": [{"u": "x", "v": "y", "w": {"kind": "power", "c": 2.0, "p": 2.0}}],
          "identify": [["x", "z"]]
        }"#,
    );
    let out = bin().arg("resistance").arg(&file).args(["--pair", "x,z"]).output().unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(value(&out), 0.0);
}

#[test]
fn matrix_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "split.json", SPLIT);
    let out = bin()
        .arg("resistance")
        .arg(&file)
        .args(["--format", "csv"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.trim_end().lines().collect();
    assert_eq!(lines[0], ",a,b,z");
    let a_row: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(a_row[0], "a");
    assert_eq!(a_row[1], "0");
    assert_eq!(a_row[3], "inf");
    let b = a_row[2].parse::<f64>().unwrap();
    assert!((b - 2.0f64.sqrt()).abs() <= 1e-6, "R(a,b) printed as {b}");
    assert_eq!(lines[3].split(',').next(), Some("z"));
}

#[test]
fn matrix_json_encodes_infinity() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "split.json", SPLIT);
    let out = bin().arg("resistance").arg(&file).output().unwrap();
    assert_eq!(code(&out), 0);
    let m: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(m["kind"], "elementary");
    assert_eq!(m["labels"][2], "z");
    assert_eq!(m["entries"][0][0], 0.0);
    assert_eq!(m["entries"][0][2]["inf"], true);
}

#[test]
fn functional_frozen_values() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "edge.json", EDGE);
    let f = write(dir.path(), "f.json", r#"{"x": 1.0, "y": 0.0}"#);
    let phi = write(dir.path(), "phi.json", r#"{"x": 1.0, "y": -1.0}"#);
    let run = |op: &str, vec: &PathBuf, extra: &[&str]| -> f64 {
        let out = bin()
            .arg("functional")
            .arg(&file)
            .args(["--op", op, "--vector"])
            .arg(vec)
            .args(extra)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{op}: {}", stderr_str(&out));
        value(&out)
    };
    assert!((run("eval", &f, &[]) - 1.0).abs() <= 1e-12);
    assert!((run("luxemburg", &f, &[]) - 1.0).abs() <= 1e-6);
    assert!((run("orlicz", &f, &[]) - 2.0).abs() <= 1e-6);
    assert!((run("conjugate", &phi, &[]) - 0.25).abs() <= 1e-6);
    let third = run("approx", &f, &["--alpha", "1.0"]);
    assert!((third - 1.0 / 3.0).abs() <= 1e-6, "approximant at alpha 1: {third}");
}

#[test]
fn parse_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "bad.json", "{ not json");
    let out = bin().arg("resistance").arg(&file).output().unwrap();
    assert_eq!(code(&out), 2);
    assert!(stderr_str(&out).contains("error"));
}

#[test]
fn unknown_vertex_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "edge.json", EDGE);
    let out = bin().arg("resistance").arg(&file).args(["--pair", "x,nosuch"]).output().unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn missing_coverage_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "edge.json", EDGE);
    let f = write(dir.path(), "short.json", r#"{"x": 1.0}"#);
    let out = bin()
        .arg("functional")
        .arg(&file)
        .args(["--op", "eval", "--vector"])
        .arg(&f)
        .output()
        .unwrap();
    assert_eq!(code(&out), 5);
}

#[test]
fn orlicz_cap_exits_6() {
    let dir = tempfile::tempdir().unwrap();
    let labels: Vec<String> = (0..7).map(|i| format!("v{i}")).collect();
    let edges: Vec<String> = (0..6)
        .map(|i| {
            format!(
                r#"{{"u": "v{i}", "v": "v{}", "w": {{"kind": "power", "c": 1.0, "p": 2.0}}}}"#,
                i + 1
            )
        })
        .collect();
    let network = format!(
        r#"{{"vertices": [{}], "edges": [{}]}}"#,
        labels.iter().map(|l| format!("\"{l}\"")).collect::<Vec<_>>().join(", "),
        edges.join(", ")
    );
    let file = write(dir.path(), "path7.json", &network);
    let vector = format!(
        "{{{}}}",
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| format!("\"{l}\": {}.0", i))
            .collect::<Vec<_>>()
            .join(", ")
    );
    let f = write(dir.path(), "f7.json", &vector);
    let out = bin()
        .arg("functional")
        .arg(&file)
        .args(["--op", "orlicz", "--vector"])
        .arg(&f)
        .output()
        .unwrap();
    assert_eq!(code(&out), 6);
}

#[test]
fn bad_tilt_exits_7() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "edge.json", EDGE);
    let out = bin()
        .arg("resistance")
        .arg(&file)
        .args(["--kind", "t", "--t", "-1.0", "--pair", "x,y"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 7);
}

#[test]
fn exhausted_budget_exits_4_with_value() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "cycle.json", CYCLE);
    let out = bin()
        .arg("resistance")
        .arg(&file)
        .args(["--pair", "a,b"])
        .env("RESLAB_MAX_ITERS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 4, "stderr: {}", stderr_str(&out));
    assert!(value(&out).is_finite());
    assert!(stderr_str(&out).contains("budget"));
}

#[test]
fn verify_reports_pass_and_rerun_identically() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "cycle.json", CYCLE);
    let run = || {
        bin()
            .arg("verify")
            .arg(&file)
            .args(["--check", "contraction,triangle,homogeneous", "--seed", "7"])
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(code(&first), 0, "stderr: {}", stderr_str(&first));
    let reports: serde_json::Value = serde_json::from_str(&stdout_str(&first)).unwrap();
    let arr = reports.as_array().unwrap();
    assert!(!arr.is_empty());
    assert!(arr.iter().all(|r| r["passed"] == true));
    let second = run();
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn negative_control_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "control.json",
        r#"{
          "vertices": ["x", "y"],
          "edges": [{"u": "x", "v": "y", "w": {"kind": "power", "c": 2.0, "p": 2.0}}],
          "negative_control": {"u": "x", "v": "y", "coeff": 0.8}
        }"#,
    );
    let out = bin()
        .arg("verify")
        .arg(&file)
        .args(["--check", "contraction"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    let reports: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(reports[0]["passed"], false);
    assert!(!reports[0]["witness"].is_null());
}

#[test]
fn out_flag_writes_file_and_keeps_stdout_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "edge.json", EDGE);
    let target = dir.path().join("value.json");
    let out = bin()
        .arg("resistance")
        .arg(&file)
        .args(["--pair", "x,y", "--out"])
        .arg(&target)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(stdout_str(&out).is_empty());
    let text = fs::read_to_string(&target).unwrap();
    assert!(text.ends_with('\n'));
    let v: f64 = text.trim().parse().unwrap();
    assert!((v - 1.0).abs() <= 1e-6);
}
