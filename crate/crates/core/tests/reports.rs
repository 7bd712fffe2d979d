mod common;

use std::path::PathBuf;

use common::*;
use foliation_core::cli::{exit_code, run, Command, EXIT_INPUT};
use serde_json::Value;

fn commands(name: &str) -> Vec<Command> {
    if name == "non-involutive-pair" {
        return vec![Command::CheckInvolutive];
    }
    let mut out = vec![
        Command::CheckInvolutive,
        Command::Isotropy,
        Command::Filtration,
        Command::LinearHolonomy,
        Command::Levi,
        Command::ArtinRees { max_degree: Some(8) },
    ];
    if ["sl2", "perturbed-sl2", "sl2-semidirect-euler"].contains(&name) {
        out.push(Command::Linearize { order: Some(5) });
        out.push(Command::RadicalFoliation { order: Some(5) });
    }
    out
}

fn golden_path(name: &str, cmd: &Command) -> PathBuf {
    fixture_dir().join("golden").join(format!("{name}.{}.json", cmd.name()))
}

/// Reports without timing must match the stored files byte for byte.
/// Set `UPDATE_GOLDEN=1` to rewrite them.
#[test]
fn golden_reports() {
    let update = std::env::var("UPDATE_GOLDEN").is_ok_and(|v| v == "1");
    for name in FIXTURES {
        let src = fixture_source(name);
        for cmd in commands(name) {
            let got = run(&cmd, &src).unwrap_or_else(|e| panic!("{name} {}: {e}", cmd.name())).to_json(false);
            let path = golden_path(name, &cmd);
            if update {
                std::fs::create_dir_all(path.parent().unwrap()).unwrap();
                std::fs::write(&path, &got).unwrap();
            } else {
                let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
                assert_eq!(got, want, "{}", path.display());
            }
        }
    }
}

#[test]
fn isotropy_of_circles() {
    let r = run(&Command::Isotropy, "vars: x, y; gen: -1*y*dx + x*dy;").unwrap();
    assert_eq!(r.payload["dim"], 1);
    assert_eq!(r.payload["abelian"], true);
    assert_eq!(r.payload["semisimple_dim"], 0);
}

#[test]
fn artin_rees_on_weighted() {
    let r = run(&Command::ArtinRees { max_degree: Some(8) }, &fixture_source("weighted-n2")).unwrap();
    assert_eq!(r.payload["bound"], 2);
    assert_eq!(r.payload["witness"], "x1^2*dx2");
}

#[test]
fn linearize_certification() {
    let r = run(&Command::Linearize { order: Some(5) }, &fixture_source("perturbed-sl2")).unwrap();
    assert_eq!(r.certification["statement"], "flat and linear through order 5");
}

#[test]
fn verify_round_trip() {
    let src = fixture_source("perturbed-sl2");
    let r = run(&Command::Linearize { order: Some(4) }, &src).unwrap();
    let conn = serde_json::to_string(&r.payload["connection"]).unwrap();
    let v = run(&Command::Verify { connection: conn, order: None }, &src).unwrap();
    assert_eq!(v.payload["images_in_module"], true);
    assert_eq!(v.certification["first_nonzero_degree"], Value::Null);
}

#[test]
fn input_hash_is_sha256_of_source() {
    let src = fixture_source("circles");
    let r = run(&Command::CheckInvolutive, &src).unwrap();
    assert_eq!(r.input_hash.len(), 64);
    let changed = run(&Command::CheckInvolutive, &format!("{src}\n# comment\n")).unwrap();
    assert_ne!(r.input_hash, changed.input_hash);
    assert_eq!(r.payload, changed.payload);
}

#[test]
fn rejections() {
    for src in ["vars: x; gen: dx;", "vars: x; gen: x*dz;", "vars: x;", "vars: x; gen: x*dx +;"] {
        let e = run(&Command::Isotropy, src).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_INPUT, "{src}: {e}");
    }
    let e = run(&Command::Isotropy, &fixture_source("non-involutive-pair")).unwrap_err();
    assert_eq!(exit_code(&e), EXIT_INPUT, "{e}");
}
