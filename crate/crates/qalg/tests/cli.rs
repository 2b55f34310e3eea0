//! End-to-end tests for the `qalg` binary: exit codes, output formats,
//! determinism across reruns, and the universe-cap environment variable.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn qalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qalg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn counterexample_passes_with_exit_zero() {
    let out = qalg(&["counterexample", "--eps", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("overall: pass"), "got: {text}");
    assert!(text.contains("1.5"));
}

#[test]
fn counterexample_rejects_bad_eps_with_exit_two() {
    for args in [
        ["counterexample", "--eps", "1.5"],
        ["counterexample", "--eps", "0"],
    ] {
        let out = qalg(&args);
        assert_eq!(out.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn counterexample_rejects_shallow_universe_with_exit_two() {
    let out = qalg(&["counterexample", "--eps", "0.5", "--max-depth", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_check_exits_one() {
    // left projection interprets the monoid signature but breaks the unit law
    let out = qalg(&[
        "check",
        "--algebra",
        &fixture("left-projection.json"),
        "--variety",
        &fixture("monoid-variety.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("overall: FAIL"));
}

#[test]
fn passing_check_exits_zero() {
    let out = qalg(&[
        "check",
        "--algebra",
        &fixture("semilattice2.json"),
        "--variety",
        "semilattice",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn free_monoid_distance_matches_word_metric() {
    let out = qalg(&[
        "free",
        "--variety",
        "monoid",
        "--space",
        &fixture("ab1.json"),
        "--pairs",
        "(mul a (mul a b)),(mul a (mul b b));a,(mul a a)",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("= 1"), "got: {text}");
    assert!(text.contains("= inf"), "got: {text}");
}

#[test]
fn free_semilattice_distance_is_hausdorff() {
    let out = qalg(&[
        "free",
        "--variety",
        "semilattice",
        "--space",
        &fixture("pqr.json"),
        "--pairs",
        "{p},{q,r}",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("= 3"));
}

#[test]
fn json_output_is_machine_readable() {
    let out = qalg(&[
        "free",
        "--variety",
        &format!("action:{}", fixture("em-monoid.json")),
        "--space",
        &fixture("ab1.json"),
        "--pairs",
        "(m a),b",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows[0]["dist"], serde_json::json!(1.3));
}

#[test]
fn csv_output_has_header_and_rows() {
    let out = qalg(&[
        "counterexample",
        "--eps",
        "0.25",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().starts_with("claim,"));
    assert!(text.lines().count() > 5);
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["counterexample", "--eps", "0.5", "--format", "json"];
    let first = qalg(&args);
    let second = qalg(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join("qalg-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = qalg(&[
        "colimit",
        "--chain",
        &fixture("halving.json"),
        "--pair",
        "a,b",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["trend"], "collapsing toward 0");
    std::fs::remove_file(&path).ok();
}

#[test]
fn universe_cap_env_var_limits_enumeration() {
    let out = Command::new(env!("CARGO_BIN_EXE_qalg"))
        .args(["counterexample", "--eps", "0.5"])
        .env("QALG_UNIVERSE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cap"), "got: {err}");
}

#[test]
fn factorize_refutes_two_ops_with_exit_one() {
    let out = qalg(&[
        "factorize",
        "--model",
        "two-eps-ops:0.5",
        "--space",
        &fixture("ab1.json"),
        "--max-depth",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["claims"][0]["status"], serde_json::json!("fail"));
    assert_eq!(
        v["claims"][0]["witness"]["witness"]["downstream"],
        serde_json::json!(1.5)
    );
}

#[test]
fn factorize_confirms_word_model_with_exit_zero() {
    let out = qalg(&[
        "factorize",
        "--model",
        "word",
        "--space",
        &fixture("ab1.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn condition_sweep_passes_on_grid() {
    let out = qalg(&["condition", "--eps", "0.5", "--grid", "0.25,0.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("overall: pass"));
}

#[test]
fn laws_pass_for_closed_form_models() {
    for model in ["word", "semilattice", "small:0.5"] {
        let out = qalg(&[
            "laws",
            "--model",
            model,
            "--space",
            &fixture("ab02.json"),
        ]);
        assert_eq!(out.status.code(), Some(0), "model {model}");
    }
}

#[test]
fn meet_command_reports_glb() {
    let out = qalg(&[
        "meet",
        "--left",
        &fixture("pqr.json"),
        "--right",
        &fixture("pqr.json"),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v.get("dist").is_some() || v.get("points").is_some(), "got: {v}");
}

#[test]
fn unknown_model_is_a_usage_error() {
    let out = qalg(&[
        "laws",
        "--model",
        "frobnicate",
        "--space",
        &fixture("ab1.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
}
