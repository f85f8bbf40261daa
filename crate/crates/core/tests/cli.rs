use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_higgs-harmonic"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    v["data"].clone()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn listing(dir: &Path) -> Vec<String> {
    if !dir.exists() {
        return Vec::new();
    }
    let mut names: Vec<String> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    names
}

#[test]
fn monodromy_s_frame_at_half() {
    let d = json(&run(&["local-model", "monodromy", "--theta", "0.5", "--basis", "s"]));
    let m = &d["matrix"];
    let entry = |i: usize, j: usize| (num(&m[i][j][0]), num(&m[i][j][1]));
    let close = |(a, b): (f64, f64), (x, y): (f64, f64)| (a - x).abs() < 1e-12 && (b - y).abs() < 1e-12;
    assert!(close(entry(0, 0), (0.0, -1.0)));
    assert!(close(entry(1, 1), (0.0, 1.0)));
    assert!(close(entry(0, 1), (0.0, 0.0)) && close(entry(1, 0), (0.0, 0.0)));
    assert!((num(&d["det"][0]) - 1.0).abs() < 1e-12);
}

#[test]
fn cusp_metric_at_inverse_e() {
    let d = json(&run(&["local-model", "eval", "--theta", "0", "--r", "0.367879441"]));
    let row = &d["rows"][0];
    assert!((num(&row["h11"]) - 1.0).abs() < 1e-8);
    assert!((num(&row["h22"]) - 1.0).abs() < 1e-8);
}

#[test]
fn flatness_report() {
    let d = json(&run(&["local-model", "flatness", "--theta", "0.25", "--grid", "64x32"]));
    assert_eq!(d["reports"][0]["n_r"], 64);
    assert!(num(&d["min_order"]) >= 1.8);
}

#[test]
fn curvature_balance() {
    let d = json(&run(&["local-model", "curvature", "--theta", "0.6", "--points", "30"]));
    for row in d["rows"].as_array().unwrap() {
        assert!(num(&row["balance"]).abs() < 1e-12);
    }
}

#[test]
fn growth_exponent() {
    let d = json(&run(&["local-model", "growth", "--theta", "0.5", "--section", "w10"]));
    assert!((num(&d["fitted"]) - num(&d["predicted"])).abs() < 1e-3);
}

#[test]
fn mcowen_examples() {
    let d = json(&run(&["stability", "mcowen", "--genus", "2", "--points", "1", "--angles", "0.5"]));
    assert_eq!(d["stable"], true);
    assert_eq!(d["constraint_value"]["exact"], "5/2");
    assert_eq!(d["degree"]["exact"], "0");

    let d = json(&run(&["stability", "mcowen", "--genus", "0", "--points", "3", "--angles", "0.5,0.5,0.5"]));
    assert_eq!(d["stable"], false);
    assert_eq!(d["slope_test"], "unstable");
    assert_eq!(d["degree"]["exact"], "0");
}

#[test]
fn mcowen_validation() {
    assert_eq!(
        run(&["stability", "mcowen", "--genus", "1", "--points", "1", "--angles", "1.5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["stability", "mcowen", "--genus", "1", "--points", "1", "--angles", "-0.2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["stability", "mcowen", "--genus", "1", "--points", "2", "--angles", "0.5"]).status.code(),
        Some(2)
    );
}

#[test]
fn stability_check_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    std::fs::write(
        &input,
        r#"{"bundle": {"rank": 2, "deg_E0": 0}, "subobjects": [{"rank": 1, "deg_E0": 1}, {"rank": 1, "deg_E0": -1}]}"#,
    )
    .unwrap();
    let d = json(&run(&["stability", "check", "--input", input.to_str().unwrap()]));
    assert_eq!(d["verdict"], "unstable");
    assert_eq!(d["witness"], 0);
    assert_eq!(d["phi_invariance_unverified"], true);

    std::fs::write(&input, "{\"bundle\": 3}").unwrap();
    assert_eq!(run(&["stability", "check", "--input", input.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["stability", "check", "--input", "/nonexistent/x.json"]).status.code(), Some(2));
}

#[test]
fn radial_default_config() {
    let d = json(&run(&["solve", "radial"]));
    assert!(num(&d["sup_error"]) < 5e-5);
    let d = json(&run(&["solve", "radial", "--theta", "0"]));
    assert!(num(&d["sup_error"]) < 5e-5);
}

#[test]
fn solution_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = bin().args(["--out-dir", out.to_str().unwrap(), "solve", "radial"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(listing(&out), ["radial.csv", "summary.json"]);
    let csv = std::fs::read_to_string(out.join("radial.csv")).unwrap();
    assert!(csv.starts_with("s,w,oracle,residual\n"));
    assert_eq!(csv.lines().count(), 401);
}

#[test]
fn curvature_second_order() {
    let d = json(&run(&["solve", "curvature", "--theta", "0.5"]));
    for o in d["orders"].as_array().unwrap() {
        assert!((1.8..=2.2).contains(&num(o)));
    }
}

#[test]
fn annulus_symmetry() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("a.cfg");
    std::fs::write(&cfg, "# coarse\nn_s = 24\nn_angle = 16\n").unwrap();
    let d = json(&run(&["solve", "annulus", "--config", cfg.to_str().unwrap()]));
    assert!(num(&d["angular_content"]) < 1e-8);
}

#[test]
fn malformed_config_leaves_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    for (name, text) in [("a.cfg", "theta 0.5\n"), ("b.cfg", "bogus = 1\n"), ("c.cfg", "nodes = many\n")] {
        let cfg = dir.path().join(name);
        std::fs::write(&cfg, text).unwrap();
        let o = bin()
            .args(["--out-dir", out.to_str().unwrap(), "solve", "radial", "--config", cfg.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(2), "{text}");
        assert!(o.stdout.is_empty());
        assert!(listing(&out).is_empty());
    }
}

#[test]
fn non_convergence_writes_history() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = dir.path().join("tight.cfg");
    std::fs::write(&cfg, "max_iterations = 1\n").unwrap();
    let o = bin()
        .args(["--out-dir", out.to_str().unwrap(), "solve", "radial", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(listing(&out), ["residual_history.csv"]);
    let text = std::fs::read_to_string(out.join("residual_history.csv")).unwrap();
    assert!(text.starts_with("iteration,residual\n"));
}

#[test]
fn analyticity_modes() {
    for (mode, want) in [("closed_form", "pass"), ("radial_solver", "pass"), ("linear", "pass"), ("kink", "fail")] {
        let d = json(&run(&["probe", "analyticity", "--mode", mode]));
        assert_eq!(d["certification"], want, "{mode}");
    }
}

#[test]
fn monodromy_halving_distances() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["--out-dir", dir.path().to_str().unwrap(), "probe", "monodromy", "--thetas", "0.5,0.25,0.125", "--svg"])
        .output()
        .unwrap();
    let d = json(&o);
    assert_eq!(d["rows"].as_array().unwrap().len(), 3);
    assert_eq!(d["ratios"].as_array().unwrap().len(), 2);
    assert_eq!(listing(dir.path()), ["monodromy.csv", "monodromy.json", "monodromy.svg"]);
    assert_eq!(run(&["probe", "monodromy", "--thetas", "0.125,0.25"]).status.code(), Some(2));
}

#[test]
fn family_table_is_independent_of_jobs() {
    let args = ["probe", "family", "--thetas", "0.1,0.3,0.5,0.7", "--mode", "radial_solver"];
    let a = run(&args);
    let b = bin().arg("--jobs").arg("4").args(args).output().unwrap();
    assert_eq!(json(&a), json(&b));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["local-model", "eval", "--theta", "0.5", "--bogus"]).status.code(), Some(64));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&[]).status.code(), Some(64));
    assert_eq!(run(&["--jobs", "0", "solve", "radial"]).status.code(), Some(64));
    assert_eq!(run(&["local-model", "flatness", "--theta", "0.5", "--grid", "64by32"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn validation_errors() {
    assert_eq!(run(&["local-model", "eval", "--theta", "1.2", "--r", "0.3"]).status.code(), Some(2));
    assert_eq!(run(&["local-model", "eval", "--theta", "0.2", "--r", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["local-model", "monodromy", "--theta", "0", "--basis", "s"]).status.code(), Some(2));
}
