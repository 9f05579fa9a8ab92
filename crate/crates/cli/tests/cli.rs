use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use ufss::algebra::{parse_qpoly, ParamPoly, Rational};
use ufss::model::{DefSet, SmallSet, Ufss, XDesc, ZDesc};
use ufss::pipeline::Instance;

fn ufss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ufss")).args(args).output().expect("binary runs")
}

/// `z - x*y` over `S = {1, 2}`.
fn fixture(dir: &Path) -> String {
    let p = parse_qpoly("z - x*y", &["x", "y", "z"]).unwrap();
    let s = Arc::new(SmallSet::base(1, vec![vec![Rational::from_int(1)], vec![Rational::from_int(2)]]));
    let u = Ufss::new(ZDesc::set(DefSet::equation(ParamPoly::from_joint(1, 1, &p))), XDesc::explicit(1, s), false);
    let path = dir.join("zxy.json");
    fs::write(&path, Instance::Rcf { ufss: u }.to_json()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn decompose_then_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path());
    let out = dir.path().join("dec.json");
    let trace = dir.path().join("trace.json");
    let r = ufss(&["decompose", "--case", "rcf", "--input", &input, "--output", out.to_str().unwrap(), "--emit-trace", trace.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(trace.exists());
    let r = ufss(&["verify", "--instance", &input, "--decomposition", out.to_str().unwrap(), "--grid", "-2:2:1/2", "--seed", "3"]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stdout));
    assert!(String::from_utf8_lossy(&r.stdout).contains("overall: PASS"));
}

#[test]
fn roundtrip_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path());
    let report = dir.path().join("report.json");
    let r = ufss(&["roundtrip", "--input", &input, "--report", report.to_str().unwrap(), "--fail-on-fallback"]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let text = fs::read_to_string(report).unwrap();
    assert!(text.contains("\"union\"") && text.contains("\"PASS\""));
}

#[test]
fn corrupted_decomposition_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path());
    let out = dir.path().join("dec.json");
    assert!(ufss(&["decompose", "--case", "rcf", "--input", &input, "--output", out.to_str().unwrap()]).status.success());
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    v["pieces"].as_array_mut().unwrap().truncate(1);
    fs::write(&out, v.to_string()).unwrap();
    let r = ufss(&["verify", "--instance", &input, "--decomposition", out.to_str().unwrap(), "--grid", "-2:2:1"]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("witness"));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path());
    let out = dir.path().join("dec.json");
    let r = ufss(&["decompose", "--case", "linear", "--input", &input, "--output", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    let bad = fs::read_to_string(&input).unwrap().replacen("\"1\"", "\"1/0\"", 1);
    let bad_path = dir.path().join("bad.json");
    fs::write(&bad_path, bad).unwrap();
    let r = ufss(&["decompose", "--case", "rcf", "--input", bad_path.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("parse error at"));
    let r = ufss(&["decompose", "--case", "rcf", "--input", "/nonexistent.json", "--output", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let r = ufss(&["gen", "--count", "6", "--seed", "7", "--out", d.to_str().unwrap()]);
        assert!(r.status.success());
    }
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 6);
    for n in names {
        assert_eq!(fs::read(a.join(&n)).unwrap(), fs::read(b.join(&n)).unwrap());
    }
    // every generated instance round-trips through the CLI
    let first = fs::read_dir(&a).unwrap().next().unwrap().unwrap().path();
    let r = ufss(&["roundtrip", "--input", first.to_str().unwrap(), "--grid", "-1:1:1/2"]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stdout));
}
