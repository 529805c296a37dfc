use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn chyp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chyp")).args(args).env_remove("CHYP_TOL").output().expect("runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn classify_examples() {
    let out = chyp(&["classify", "3", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["f_value"], 0.0);
    assert_eq!(v["class"], "boundary");
    let v = json(&chyp(&["classify", "0", "0"]));
    assert_eq!(v["f_value"], -27.0);
    assert_eq!(v["class"], "regular-elliptic");
    assert_eq!(json(&chyp(&["classify", "25.45585", "0"]))["class"], "hyperbolic");
    assert_eq!(json(&chyp(&["classify", "-0.5", "0.25"]))["class"], "regular-elliptic");
    assert_eq!(chyp(&["classify", "three", "0"]).status.code(), Some(2));
}

#[test]
fn alpha_scan_locates_the_transition() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = chyp(&["--out-dir", d, "alpha-scan", "--n", "9", "--resolution", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let t = v["transition"].as_f64().unwrap();
    assert!((t - 0.4506).abs() <= 0.003);
    assert!((t - v["alpha_zero"].as_f64().unwrap()).abs() <= v["grid_step"].as_f64().unwrap());
    let csv = read(dir.path(), "alpha_scan.csv");
    assert_eq!(csv.lines().next(), Some("alpha_or_word,trace_re,trace_im,goldman_f,class"));
    assert_eq!(csv.lines().count(), 1001);
    let body: Value = serde_json::from_str(&read(dir.path(), "alpha_scan.json")).unwrap();
    assert_eq!(body["rows"].as_array().unwrap().len(), 1000);
    assert_eq!(body["convention"], "half-angle");

    let v = json(&chyp(&["--out-dir", d, "alpha-scan", "--n", "4", "--resolution", "50"]));
    let (lo, a0) = (v["alpha_min"].as_f64().unwrap(), v["alpha_zero"].as_f64().unwrap());
    assert!(lo < a0 && a0 < std::f64::consts::PI);
}

#[test]
fn domain_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(chyp(&["--out-dir", d, "alpha-scan", "--n", "3"]).status.code(), Some(3));
    assert_eq!(chyp(&["--out-dir", d, "alpha-scan", "--resolution", "1"]).status.code(), Some(2));
    assert_eq!(chyp(&["build-triangle", "--p", "9", "--q", "3", "--r", "3"]).status.code(), Some(3));
    assert_eq!(chyp(&["cover", "--genus", "1"]).status.code(), Some(3));
    assert_eq!(chyp(&["cover"]).status.code(), Some(2));
    assert_eq!(chyp(&["falsify", "--alpha", "pi"]).status.code(), Some(2));
    assert_eq!(chyp(&["--tol", "0", "classify", "1", "0"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_chyp"))
        .args(["classify", "1", "0"])
        .env("CHYP_TOL", "tight")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn falsifier_witnesses() {
    let below = format!("{}", 0.4505933233000063 - 0.2);
    let v = json(&chyp(&["falsify", "--n", "9", "--alpha", &below, "--maxlen", "6"]));
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["alpha_or_word"] == "1323"));
    let out = chyp(&["falsify", "--n", "9", "--alpha", "3.141592653589793", "--maxlen", "8", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
}

#[test]
fn gon18_report_is_verified_and_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let out = chyp(&["--out-dir", a.path().to_str().unwrap(), "gon18"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["area"].as_f64().unwrap() - 12.566371).abs() < 1e-6);
    assert_eq!(v["cycles"], 6);
    assert_eq!(v["genus"], 2);
    assert_eq!(v["closure_step"], 19);
    assert_eq!(v["self_intersections"], 9);
    let again = chyp(&["--out-dir", b.path().to_str().unwrap(), "gon18"]);
    assert_eq!(out.stdout, again.stdout);
    assert_eq!(read(a.path(), "gon18.svg"), read(b.path(), "gon18.svg"));
    assert!(read(a.path(), "gon18.svg").starts_with("<svg"));
}

#[test]
fn adjudication_is_deterministic() {
    let out = chyp(&["adjudicate"]);
    let v = json(&out);
    assert_eq!(v["matched_constant"], "+3");
    let rows = v["order_table"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["product"] == "I2I3" && r["convention"] == "half-angle"));
    assert!(rows.iter().any(|r| r["product"] == "I2I3" && r["convention"] == "relation-enforcing"));
    assert_eq!(out.stdout, chyp(&["adjudicate"]).stdout);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, format!("# scan\nn = 9\nresolution = 50\nout_dir = {}\n", dir.path().display())).unwrap();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(chyp(&["--config", cfg, "alpha-scan"]).status.code(), Some(0));
    assert_eq!(read(dir.path(), "alpha_scan.csv").lines().count(), 51);
    // Coarse grids may miss the transition by more than a step; only the
    // row count matters here.
    let _ = chyp(&["--config", cfg, "alpha-scan", "--resolution", "20"]);
    assert_eq!(read(dir.path(), "alpha_scan.csv").lines().count(), 21);
}

#[test]
fn cosets_and_covers() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&chyp(&["--out-dir", dir.path().to_str().unwrap(), "cosets", "--maxlen", "4"]));
    assert_eq!(v["labels_realized"], 18);
    let csv = read(dir.path(), "cosets.csv");
    assert_eq!(csv.lines().next(), Some("word,label"));
    assert_eq!(csv.lines().count(), 1 + v["words"].as_u64().unwrap() as usize);

    for g in [2u64, 3, 5, 7] {
        let v = json(&chyp(&["cover", "--genus", &g.to_string()]));
        assert_eq!(v["degree"], g - 1);
        assert_eq!(v["euler_characteristic"], -2 * (g as i64 - 1));
        assert_eq!(v["cover_genus"], g);
        assert_eq!(v["psi_axis"], 0);
        assert_eq!(v["axis_lifts"], g - 1);
    }
    let v = json(&chyp(&["cover", "--genus", "4", "--beta", "0,1,0,0"]));
    assert_eq!(v["beta"], serde_json::json!([0, 1, 0, 0]));
}

#[test]
fn deltoid_and_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&chyp(&["--out-dir", dir.path().to_str().unwrap(), "deltoid-plot", "--maxlen", "4"]));
    assert_eq!(v["words"], 45);
    assert!(dir.path().join("deltoid.svg").exists());
    let v = json(&chyp(&["build-triangle", "--p", "3", "--q", "3", "--r", "9", "--alpha", "3.141592653589793"]));
    assert!((v["w_a"]["trace"][0].as_f64().unwrap() - 25.45585).abs() < 1e-5);
    assert_eq!(v["orders"]["I2I3"], 18);
    let v = json(&chyp(&["build-triangle", "--convention", "relation-enforcing"]));
    assert_eq!(v["orders"]["I2I3"], 3);
    assert_eq!(v["orders"]["I1I2"], 9);
}
