use std::fs;
use std::process::{Command, Output};

fn pd7kit(args: &[&str]) -> Output {
    let cache = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("pd7cache");
    Command::new(env!("CARGO_BIN_EXE_pd7kit")).args(args).arg("--cache").arg(cache).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn boutroux_real_point() {
    let v = json(&pd7kit(&["boutroux", "--y", "0.15,0"]));
    assert_eq!(v["schema"], "pd7kit/1");
    assert!((v["c1"]["re"].as_f64().unwrap() + 0.12057400565).abs() < 1e-9);
    assert_eq!(v["c1"]["im"].as_f64().unwrap(), 0.0);
    assert!(v["residuals"]["I12"].as_f64().unwrap().abs() <= 1e-10);
    assert!(v["residuals"]["I23"].as_f64().unwrap().abs() <= 1e-10);
    assert_eq!(v["roots"].as_array().unwrap().len(), 3);
}

#[test]
fn output_is_deterministic() {
    let a = pd7kit(&["boutroux", "--y", "0.15,0.05"]);
    let b = pd7kit(&["boutroux", "--y", "0.15,0.05"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_and_domain_errors() {
    assert_eq!(pd7kit(&["boutroux", "--bogus"]).status.code(), Some(2));
    assert_eq!(pd7kit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pd7kit(&["boutroux", "--y", "0.39,0.39"]).status.code(), Some(1));
    assert_eq!(pd7kit(&["eval", "--n", "0", "--y", "0.1,0"]).status.code(), Some(1));
}

#[test]
fn ohyama_forms() {
    let out = pd7kit(&["ohyama", "--n", "3", "--emit", "pretty"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "R_3 = ζ^9 - 4ζ^7 + 5ζ^5\n");
    let v = json(&pd7kit(&["ohyama", "--n", "-3"]));
    assert_eq!(v["min_exp"], -4);
    assert_eq!(v["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn eval_matches_closed_form() {
    let v = json(&pd7kit(&["eval", "--n", "0", "--x", "8,0"]));
    assert!((v["u"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("pd7.conf");
    fs::write(&cfg, "# test\nformat = pretty\n").unwrap();
    let c = cfg.to_str().unwrap();
    let pretty = pd7kit(&["--config", c, "equilibrium", "--y", "0.2"]);
    assert!(String::from_utf8(pretty.stdout).unwrap().contains("\n  \"U\""));
    let compact = pd7kit(&["--config", c, "--format", "json", "equilibrium", "--y", "0.2"]);
    assert_eq!(String::from_utf8(compact.stdout).unwrap().lines().count(), 1);
    fs::write(&cfg, "pole_tol = -3\n").unwrap();
    assert_eq!(pd7kit(&["--config", c, "equilibrium", "--y", "0.2"]).status.code(), Some(2));
}

#[test]
fn grid_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let out = pd7kit(&["grid", "--n", "2", "--res", "5", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "Y_re,Y_im,modulus");
    assert_eq!(lines.len(), 26);
    assert!(lines.contains(&"0.0,0.0,inf"));
}

#[test]
fn toy_and_verify_reports() {
    let v = json(&pd7kit(&["toy-rhp", "--z", "3,-2", "--full-report"]));
    assert!((v["q"]["re"].as_f64().unwrap() + 1.0).abs() < 1e-10);
    assert!(v["jump_residual"].as_f64().unwrap() < 1e-7);
    assert_eq!(v["N1"].as_array().unwrap().len(), 2);
    let v = json(&pd7kit(&["verify", "--y", "0.15,0", "--n-list", "4,6,8"]));
    assert_eq!(v["levels"].as_array().unwrap().len(), 3);
}

#[test]
fn selftest_subset() {
    let out = pd7kit(&["selftest", "--only", "2,12"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 2);
}
