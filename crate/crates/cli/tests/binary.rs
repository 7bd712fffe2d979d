use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{name}.fol"))
}

fn foliation(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foliation")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn tmp(name: &str, contents: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("foliation-{}-{name}", std::process::id()));
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn artin_rees_weighted() {
    let out = foliation(&["artin-rees", "--max-degree", "8", fixture("weighted-n2").to_str().unwrap()]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["command"], "artin-rees");
    assert_eq!(r["payload"]["bound"], 2);
    assert_eq!(r["payload"]["witness"], "x1^2*dx2");
    assert!(r["timing"]["elapsed_ms"].is_u64());
}

#[test]
fn linearize_then_verify() {
    let out = foliation(&["linearize", "--order", "5", fixture("perturbed-sl2").to_str().unwrap()]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["certification"]["statement"], "flat and linear through order 5");
    let conn = tmp("conn.json", &r["payload"]["connection"].to_string());
    let out = foliation(&[
        "verify",
        "--connection",
        conn.to_str().unwrap(),
        "--order",
        "5",
        fixture("perturbed-sl2").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["certification"]["first_nonzero_degree"], serde_json::Value::Null);
}

#[test]
fn rejected_input_exits_with_2() {
    let bad = tmp("bad.fol", "vars: x; gen: dx;\n");
    let out = foliation(&["isotropy", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let out = foliation(&["isotropy", "/nonexistent/file.fol"]);
    assert_eq!(out.status.code(), Some(2));
    let undeclared = tmp("undeclared.fol", "vars: x;\ngen: x*dz;\n");
    let out = foliation(&["isotropy", undeclared.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 8"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn non_involutive_witness() {
    let out = foliation(&["check-involutive", fixture("non-involutive-pair").to_str().unwrap()]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["payload"]["closed"], false);
    let out = foliation(&["levi", fixture("non-involutive-pair").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
