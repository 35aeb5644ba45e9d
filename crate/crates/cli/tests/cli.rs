use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use soliton_core::symbolic::ZeroConfig;
use soliton_forge::{run, Report};

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name).display().to_string()
}

fn forge(args: &[&str]) -> soliton_forge::Outcome {
    let argv: Vec<String> = std::iter::once("soliton-forge".to_string())
        .chain(args.iter().map(|a| if a.ends_with(".man") { corpus(a) } else { a.to_string() }))
        .collect();
    run(argv)
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = forge(&a);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (serde_json::from_str(&out.stdout).unwrap(), out.code)
}

fn check<'a>(report: &'a Value, id: &str) -> &'a Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["id"] == id).unwrap_or_else(|| panic!("no check {id}"))
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_soliton-forge");
    let ok = Command::new(bin).args(["solve", "ricci", &corpus("hyperbolic.man"), "--vector", "V", "--eta", "eta"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("soliton.ricci"));
    let bad = Command::new(bin)
        .args(["solve", "ricci", &corpus("perturbed_hyperbolic.man"), "--vector", "V", "--eta", "eta"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let usage = Command::new(bin).args(["solve"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn input_errors_exit_two() {
    let out = forge(&["curvature", "does-not-exist.man"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.starts_with("error:"));
    let out = forge(&["solve", "ricci", "hyperbolic.man", "--vector", "W"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("no vector named 'W'"));
    let out = forge(&["curvature", "hyperbolic.man", "--seed", "0xZZ"]);
    assert_eq!(out.code, 2);
}

#[test]
fn parse_errors_report_line_and_column() {
    let dir = std::env::temp_dir().join(format!("soliton-forge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p: PathBuf = dir.join("bad.man");
    std::fs::write(&p, "manifold bad\ncoords x y\nmetric:\n  [x,x] = 1\n  [x,y] = x\n  [y,x] = y\n  [y,y] = 1\n").unwrap();
    let out = run(["soliton-forge", "curvature", p.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains(":6:3: asymmetric component"), "{}", out.stderr);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "all", "lorentz.man", "--vector", "V", "--eta", "eta", "--frame", "E"][..],
        &["sphere-hypersurface", "latitude_pi4.man", "--ambient-vector", "E4", "--format", "json"][..],
    ] {
        let a = forge(args);
        let b = forge(args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.code, b.code);
    }
}

#[test]
fn json_schema_uses_decimal_strings() {
    let (r, code) = json(&["solve", "yamabe", "hyperbolic.man", "--vector", "V", "--eta", "eta", "--samples", "16", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["input_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(r["config"]["samples"], "16");
    assert_eq!(r["config"]["seed"], "7");
    assert_eq!(r["config"]["tol"], "1e-9");
    let c = check(&r, "soliton.yamabe");
    assert_eq!(c["verdict"], "certified-symbolic");
    assert_eq!(c["witnesses"]["lambda"], "-7");
    assert_eq!(c["witnesses"]["mu"], "-1");
    assert_eq!(c["witnesses"]["scal"], "-6");
    assert!(c["residual"]["max_abs"].is_string());
    assert!(c["residual"]["component"].is_null());
}

#[test]
fn failed_records_carry_component_and_expression() {
    let (r, code) = json(&["solve", "ricci", "perturbed_hyperbolic.man", "--vector", "V", "--eta", "eta"]);
    assert_eq!(code, 1);
    let c = check(&r, "soliton.ricci");
    assert_eq!(c["verdict"], "failed");
    assert_eq!(c["witnesses"]["verdict"], "not a soliton");
    assert!(c["residual"]["component"].is_string());
    assert!(c["residual"]["expression"].is_string());
    let max: f64 = c["residual"]["max_abs"].as_str().unwrap().parse().unwrap();
    assert!(max > 0.0);
    let text = forge(&["solve", "ricci", "perturbed_hyperbolic.man", "--vector", "V", "--eta", "eta"]);
    assert!(text.stdout.contains("residual ["));
    assert!(text.stdout.ends_with("1 failed\n"));
}

#[test]
fn several_files_prefix_ids_and_hash_all_inputs() {
    let (r, _) = json(&["curvature", "hyperbolic.man", "flat.man"]);
    let ids: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.iter().any(|i| i.starts_with("hyperbolic/")));
    assert!(ids.iter().any(|i| i.starts_with("flat/")));
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    let (single, _) = json(&["curvature", "hyperbolic.man"]);
    assert_ne!(r["input_sha256"], single["input_sha256"]);
}

#[test]
fn empty_report_passes() {
    let r = Report::new(&[], ZeroConfig::default(), vec![]);
    assert_eq!(r.exit_code(), 0);
    assert!(r.to_text().contains("no checks"));
    let v: Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 0);
    // sha256 of the empty input
    assert_eq!(v["input_sha256"], "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(forge(&["--help"]).code, 0);
    assert_eq!(forge(&["--version"]).code, 0);
}
