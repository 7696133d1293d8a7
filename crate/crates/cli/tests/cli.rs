use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_colmez")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32, String) {
    let mut a = vec!["--format", "json"];
    a.extend_from_slice(args);
    let out = run(&a);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (v, out.status.code().unwrap(), text)
}

fn spec(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "specs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn rows(v: &Value) -> &Vec<Value> {
    v["rows"].as_array().unwrap()
}

fn all_pass(v: &Value) -> bool {
    v["pass"] == true && rows(v).iter().all(|r| r["pass"] == true)
}

#[test]
fn single_discriminant_agrees_to_fifty_digits() {
    let (v, code, _) = json(&["colmez", "--disc", "-4"]);
    assert_eq!(code, 0);
    let r = &rows(&v)[0];
    assert_eq!((r["d"].as_i64(), r["h"].as_u64(), r["w"].as_u64()), (Some(-4), Some(1), Some(4)));
    let diff: f64 = r["diff"].as_str().unwrap().parse().unwrap();
    assert!(diff.abs() < 1e-50, "{diff}");
}

#[test]
fn suite_has_twelve_passing_rows() {
    let (v, code, _) = json(&["colmez", "--suite"]);
    assert_eq!(code, 0);
    assert_eq!(rows(&v).len(), 12);
    assert!(all_pass(&v));
}

#[test]
fn non_fundamental_discriminant_is_rejected() {
    let out = run(&["colmez", "--disc", "-5"]);
    assert_ne!(out.status.code(), Some(0));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("not fundamental") && err.contains("3 mod 4"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["--prec", "12", "colmez", "--suite"]).status.code(), Some(2));
    assert_eq!(run(&["colmez"]).status.code(), Some(2));
    assert_eq!(run(&["arch", "--check", "q1"]).status.code(), Some(2));
    assert_eq!(run(&["prop92", "--p", "11"]).status.code(), Some(2));
}

#[test]
fn failing_rows_exit_with_one() {
    // no 64-digit computation reaches 10^-200
    let (v, code, _) = json(&["colmez", "--disc", "-3", "--tol", "200"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
}

#[test]
fn json_output_round_trips() {
    for args in [
        &["colmez", "--disc", "-7,-8"][..],
        &["ptheta", "--gn-demo", "2"][..],
        &["prop92", "--p", "2", "--v-d", "0"][..],
    ] {
        let (v, _, text) = json(args);
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    }
}

#[test]
fn csv_columns_are_stable() {
    let out = run(&["--format", "csv", "colmez", "--disc", "-3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("d,h,w,lhs,rhs,diff,pass"));
    assert_eq!(text.lines().count(), 2);
    let out = run(&["--format", "csv", "prop92", "--p", "3", "--v-d", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("kind,label,lhs,rhs,pass"));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["prop92", "--p", "5"]).stdout;
    let b = run(&["prop92", "--p", "5"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn full_local_grid_passes() {
    let (v, code, _) = json(&["prop92"]);
    assert_eq!(code, 0);
    assert!(rows(&v).len() >= 1000);
    assert!(all_pass(&v));
}

#[test]
fn degenerate_case_prints_zero_on_both_sides() {
    let (v, code, _) = json(&[
        "prop92", "--p", "3", "--v-d", "0", "--ram", "split", "--case", "standard", "--y", "(p^0, p^0)", "--u-val", "0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(rows(&v).len(), 1);
    assert_eq!(rows(&v)[0]["lhs"], "0");
    assert_eq!(rows(&v)[0]["rhs"], "0");
}

#[test]
fn oracle_flag_adds_enumeration_checks() {
    let (plain, _, _) = json(&["prop92", "--p", "2,3"]);
    let (v, code, _) = json(&["prop92", "--p", "2,3", "--oracle"]);
    assert_eq!(code, 0);
    assert!(all_pass(&v));
    let kinds: std::collections::BTreeSet<&str> = rows(&v).iter().map(|r| r["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds.into_iter().collect::<Vec<_>>(), ["coset", "identity", "series", "volume"]);
    assert!(rows(&v).len() > rows(&plain).len());
}

#[test]
fn local_series_match_and_unsupported_cases_are_skipped() {
    let out = run(&["--format", "json", "local", "--p", "3", "--case", "s2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(all_pass(&v));
    assert!(rows(&v).iter().all(|r| r["label"].as_str().unwrap().starts_with("c split")));
    assert!(String::from_utf8(out.stderr).unwrap().contains("warning: skipping"));
}

#[test]
fn arch_q0_grid_passes() {
    let (v, code, _) = json(&["arch", "--check", "q0", "--points", "8"]);
    assert_eq!(code, 0);
    assert_eq!(rows(&v).len(), 8);
    assert!(all_pass(&v));
}

#[test]
fn arch_limit_at_reduced_precision() {
    let (v, code, _) = json(&["--prec", "32", "arch", "--check", "limit", "--rays", "2"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(rows(&v).len(), 2);
}

#[test]
fn ptheta_approximation_holds_for_m2() {
    let (v, code, _) = json(&["ptheta", "--spec", &spec("rank024.spec"), "--g", "m(2)"]);
    assert_eq!(code, 0);
    let rel: f64 = rows(&v)[0]["relative_error"].as_str().unwrap().parse().unwrap();
    assert!(rel < 1e-8);
    let (v, code, _) = json(&["ptheta", "--spec", &spec("rank224.spec"), "--g", "n(1/2)m(3/2)k(pi/3)"]);
    assert_eq!(code, 0);
    assert!(all_pass(&v));
}

#[test]
fn gn_demo_reports_the_vandermonde_system() {
    let (v, code, _) = json(&["ptheta", "--gn-demo", "3"]);
    assert_eq!(code, 0);
    assert_eq!(rows(&v).len(), 4);
    assert_eq!(v["summary"]["zero_only"], true);
    assert_eq!(rows(&v)[1]["node_im"].as_str().unwrap().parse::<f64>().unwrap(), -0.5);
}

#[test]
fn malformed_spec_reports_the_line() {
    let dir = std::env::temp_dir().join(format!("colmez-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("bad.spec");
    std::fs::write(&p, "gram_V = 2 1; 1 2\nembed_V1 = 0 1\n\nradius = seven\n").unwrap();
    let out = run(&["ptheta", "--spec", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.spec:4:"), "{err}");
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = std::env::temp_dir().join(format!("colmez-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("run.conf");
    std::fs::write(&p, "prec = 30\nformat = json\ndiscs = -3, -11\n").unwrap();
    let out = run(&["--config", p.to_str().unwrap(), "colmez"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["prec"], 30);
    assert_eq!(rows(&v).len(), 2);
    let out = run(&["--config", p.to_str().unwrap(), "--prec", "40", "--format", "text", "colmez"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("colmez (prec 40)"));
    std::fs::write(&p, "precision = 30\n").unwrap();
    assert_eq!(run(&["--config", p.to_str().unwrap(), "colmez"]).status.code(), Some(2));
}
