//! The `whittakerpw` binary: exit codes, persisted calibration, determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_whittakerpw"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    fs::write(dir.join(name), contents).unwrap();
    name.to_string()
}

#[test]
fn roundtrip_passes() {
    let dir = TempDir::new().unwrap();
    let f = write(
        dir.path(),
        "f.json",
        r#"{"q":"3","values":[[0,"1"],[2,"-4/5"],[5,"7"]]}"#,
    );
    let o = run(dir.path(), &["--q", "3", "roundtrip", "--in", &f]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["equal"], true);
}

#[test]
fn transform_then_invert_recovers_input() {
    let dir = TempDir::new().unwrap();
    let f = write(
        dir.path(),
        "f.json",
        r#"{"q":"2","values":[[1,"3/2"],[3,"-1"]]}"#,
    );
    let t = run(
        dir.path(),
        &["transform", "--in", &f, "--out", "big_f.json"],
    );
    assert_eq!(t.status.code(), Some(0));
    let pw = run(dir.path(), &["check-pw", "--in", "big_f.json"]);
    assert_eq!(pw.status.code(), Some(0));
    let i = run(
        dir.path(),
        &["invert", "--in", "big_f.json", "--out", "back.json"],
    );
    assert_eq!(
        i.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&i.stderr)
    );
    let back: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("back.json")).unwrap()).unwrap();
    let orig: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("f.json")).unwrap()).unwrap();
    assert_eq!(back, orig);
}

#[test]
fn check_pw_rejects_a_constant() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "one.json", r#"[[0,"1"]]"#);
    let o = run(dir.path(), &["check-pw", "--in", &f]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["passes"], false);
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"q":"2","values":[[0,"1/0"]]}"#);
    let o = run(dir.path(), &["roundtrip", "--in", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("InputParse"));
    assert_eq!(
        run(dir.path(), &["transform", "--in", "missing.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(dir.path(), &["--q", "1", "cfun"]).status.code(),
        Some(2)
    );
    assert_eq!(run(dir.path(), &["no-such-command"]).status.code(), Some(2));
}

#[test]
fn calibration_persists_and_checks_q() {
    let dir = TempDir::new().unwrap();
    let o = run(dir.path(), &["--q", "5", "calibrate"]);
    assert_eq!(o.status.code(), Some(0));
    let config: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("whittakerpw.json")).unwrap())
            .unwrap();
    assert_eq!(config["calibration"]["constant"], "1");
    assert_eq!(config["calibration"]["q"], "5");
    // the stored q is reused; overriding it conflicts with the stored calibration
    let f = write(dir.path(), "f.json", r#"{"q":"5","values":[[2,"1"]]}"#);
    assert_eq!(
        run(dir.path(), &["roundtrip", "--in", &f]).status.code(),
        Some(0)
    );
    let o = run(dir.path(), &["--q", "2", "transform", "--in", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("InvalidConfig"));
}

#[test]
fn theorem5_and_sqint_statuses() {
    let dir = TempDir::new().unwrap();
    let phi = write(dir.path(), "phi.json", r#"[[1,"1"],[-1,"-1"],[0,"2/3"]]"#);
    let o = run(dir.path(), &["theorem5", "--in", &phi]);
    assert_eq!(o.status.code(), Some(0));
    let ok = run(dir.path(), &["sqint", "--exponents", "-1,-1/2"]);
    assert_eq!(
        (ok.status.code(), stdout(&ok)),
        (Some(0), "true\n".to_string())
    );
    let bad = run(dir.path(), &["sqint", "--exponents", "-1,0"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(
        stdout(&bad),
        "false (exponent 0 is not strictly negative)\n"
    );
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let first = run(dir.path(), &["--q", "3", "cfun"]);
    let second = run(dir.path(), &["--q", "3", "cfun"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let table = run(
        dir.path(),
        &["whittaker-table", "--from", "-1", "--to", "2"],
    );
    assert_eq!(
        stdout(&table),
        "n,laurent_polynomial\n-1,0\n0,1 - 1/2*z^-1\n1,1/2*z + 1/4 + 1/4*z^-1 - 1/4*z^-2\n\
         2,1/4*z^2 + 1/8*z + 1/8 + 1/8*z^-1 + 1/8*z^-2 - 1/8*z^-3\n"
    );
}
