//! The `lasso-bmc` binary: subcommands, flags and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn bmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lasso-bmc"))
        .args(args)
        .env_remove("LASSO_BMC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn safety_counterexample_exits_one() {
    let o = bmc(&["check", path(&corpus("pifp.spec")), "--name", "Safety", "--max-scope", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("VERDICT counterexample scope State=2"), "{text}");
    assert!(text.contains("state 1: messages = {"), "{text}");
}

#[test]
fn fixed_safety_exits_zero() {
    let o = bmc(&["check", path(&corpus("pifp_fixed.spec")), "--name", "Safety", "--max-scope", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("VERDICT no-counterexample up to State=6"));
}

#[test]
fn finite_traces_flag_changes_liveness() {
    let spec = corpus("pifp_guarded.spec");
    let finite = bmc(&["check", path(&spec), "--name", "Liveness", "--finite-traces"]);
    let lasso = bmc(&["check", path(&spec), "--name", "Liveness"]);
    assert_eq!(finite.status.code(), Some(1));
    assert!(stdout(&finite).contains("loop=none"));
    assert_eq!(lasso.status.code(), Some(0));
}

#[test]
fn identical_runs_print_identical_reports() {
    let spec = corpus("pifp.spec");
    let args = ["check", path(&spec), "--name", "Liveness", "--max-scope", "4"];
    let (a, b) = (bmc(&args), bmc(&args));
    assert_eq!(a.stdout, b.stdout);
    let json = ["check", path(&spec), "--trace-format", "json", "--idiom", "global"];
    assert_eq!(bmc(&json).stdout, bmc(&json).stdout);
}

#[test]
fn json_report_mirrors_text() {
    let o = bmc(&["check", path(&corpus("pifp.spec")), "--trace-format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "counterexample");
    assert_eq!(v["scope"], 2);
    assert_eq!(v["trace"]["states"].as_array().unwrap().len(), 2);
    assert_eq!(v["log"][1]["result"], "sat");
}

#[test]
fn scope_flag_overrides_spec() {
    // three partitions need three channels, so there are no instances at all
    let o = bmc(&["check", path(&corpus("pifp.spec")), "--scope", "Partition=exactly 3"]);
    assert_eq!(o.status.code(), Some(0));
    let o = bmc(&["check", path(&corpus("pifp.spec")), "--scope", "Message=0"]);
    assert_eq!(o.status.code(), Some(0));
    let o = bmc(&["check", path(&corpus("pifp.spec")), "--scope", "Nope=1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bmc(&["check"]).status.code(), Some(2));
    assert_eq!(bmc(&["check", "/nonexistent.spec"]).status.code(), Some(2));
    let o = bmc(&["check", path(&corpus("pifp.spec")), "--name", "Missing"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Missing"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.spec");
    std::fs::write(&bad, "sig A { f : set }").unwrap();
    let o = bmc(&["check", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error"));
}

#[test]
fn bad_seed_is_a_usage_error_and_seed_is_honoured() {
    let spec = corpus("pifp.spec");
    let o = Command::new(env!("CARGO_BIN_EXE_lasso-bmc"))
        .args(["check", path(&spec)])
        .env("LASSO_BMC_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_lasso-bmc"))
        .args(["check", path(&spec)])
        .env("LASSO_BMC_SEED", "12345")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn conflict_budget_is_exit_three() {
    let o = bmc(&["check", path(&corpus("pifp_fixed.spec")), "--max-conflicts", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("VERDICT resource-limit"));
}

#[test]
fn dimacs_dir_collects_every_bound() {
    let dir = tempfile::tempdir().unwrap();
    let o = bmc(&["check", path(&corpus("pifp_fixed.spec")), "--max-scope", "3", "--dimacs", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    for k in 1..=3 {
        let cnf = std::fs::read_to_string(dir.path().join(format!("Safety_k{k}.cnf"))).unwrap();
        assert!(cnf.contains("p cnf "));
    }
}

#[test]
fn export_alloy_writes_both_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = bmc(&["export-alloy", path(&corpus("pifp.spec")), "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for name in ["trace.als", "pifp.als"] {
        assert_eq!(
            std::fs::read_to_string(dir.path().join(name)).unwrap(),
            std::fs::read_to_string(golden.join(name)).unwrap()
        );
    }
}

#[test]
fn oracle_diff_agrees_on_small_bound() {
    let o = bmc(&["oracle-diff", path(&corpus("pifp.spec")), "--max-scope", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.matches(" agree\n").count(), 2, "{text}");
    assert!(text.contains("violations=0"));
}
