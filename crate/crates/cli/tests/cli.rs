//! Black-box tests of the `fobie` binary: outputs, determinism and the
//! exit-code contract.

use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use proptest::prelude::*;
use serde_json::Value;

fn fobie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fobie")).args(args).output().expect("binary runs")
}

fn fobie_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fobie"))
        .args(args)
        .env("FOBIE_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_column(text: &str, name: &str) -> Vec<String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let j = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(j).unwrap().to_string()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn spectrum_row_zero_has_the_closed_form() {
    let o = fobie(&["spectrum", "--k", "1", "--lmax", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 52);
    let re = csv_column(&text, "re_lambda1");
    let im = csv_column(&text, "im_lambda1");
    assert!((num(&re[0]) - 0.25).abs() < 1e-14 && (num(&im[0]) - 0.25).abs() < 1e-14);
}

#[test]
fn spectrum_json_has_the_documented_shape() {
    let o = fobie(&["spectrum", "--k", "1", "--lmax", "50", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["k"], 1.0);
    assert_eq!(v["eta"], 1.0);
    assert_eq!(v["lmax"], 50);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 51);
    for key in ["ell", "s", "lambda1", "lambda2", "clustering", "single_layer", "double_layer", "hypersingular", "combined_d", "combined_n"] {
        assert!(rows[7].get(key).is_some(), "missing {key}");
    }
    assert_eq!(rows[0]["lambda1"].as_array().unwrap().len(), 2);
}

#[test]
fn negative_k_names_the_invariant() {
    let o = fobie(&["spectrum", "--k", "-1", "--lmax", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("k > 0"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["spectrum"],
        vec!["spectrum", "--k", "1", "--lmax", "0"],
        vec!["spectrum", "--k", "1", "--format", "xml"],
        vec!["frobnicate"],
        vec!["solve", "--k", "1"],
        vec!["solve", "--k", "1", "--incident", "multipole"],
        vec!["solve", "--k", "1", "--incident", "planewave", "--dir", "0,0,1", "--pol", "0,0.6,0.8"],
        vec!["sweep", "--k-min", "0.1", "--k-max", "20", "--k-count", "0"],
        vec!["sweep"],
        vec!["sweep", "--k-min", "3", "--k-max", "1", "--k-count", "4"],
    ] {
        let o = fobie(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    let o = Command::new(env!("CARGO_BIN_EXE_fobie"))
        .args(["spectrum", "--k", "1"])
        .env("FOBIE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn quick_verify_passes_within_budget() {
    let start = Instant::now();
    let o = fobie(&["verify", "--quick", "--format", "json"]);
    let secs = start.elapsed().as_secs_f64();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(secs < 30.0, "quick verify took {secs} s");
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    let suites = v["suites"].as_array().unwrap();
    assert!(suites.len() >= 15);
    for s in suites {
        for key in ["name", "passed", "measured", "threshold", "comparison", "informational", "detail"] {
            assert!(s.get(key).is_some(), "suite lacks {key}: {s}");
        }
    }
}

#[test]
fn injected_lift_fault_fails_the_lemma_gate() {
    let o = fobie(&["verify", "--quick", "--format", "json", "--inject-lift-fault", "2,4,-3,-1"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<&str> = v["suites"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["passed"] == false && s["informational"] == false)
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["lemma1-lift-coefficients"]);
    assert!(stderr(&o).contains("lemma1-lift-coefficients"));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const MULTIPOLE: &str = r#"{"terms": [
    {"l": 1, "m": 1, "a": [0.8, -0.2], "b": [0.1, 0.4]},
    {"l": 3, "m": -2, "a": [-0.5, 0.3], "b": [0.0, 0.0]},
    {"l": 4, "m": 0, "a": [0.2, 0.2], "b": [-0.6, 0.35]}
]}"#;

#[test]
fn manufactured_multipole_solve_reports_small_error() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "mp.json", MULTIPOLE);
    let out = dir.path().join("sol.json");
    let o = fobie(&["solve", "--k", "1.5", "--incident", "multipole", "--multipole-file", &spec, "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    for r in results {
        assert!(r["reference_error"].as_f64().unwrap() <= 1e-8);
    }
    assert_eq!(results[0]["formulation"], "1");
    assert!(v["cross_formulation_difference"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn plane_wave_formulations_agree() {
    let o = fobie(&["solve", "--k", "1", "--lmax", "40", "--incident", "planewave", "--dir", "0,0,1", "--pol", "1,0,0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["cross_formulation_difference"].as_f64().unwrap() <= 1e-8);
    assert_eq!(v["data_lmax"], 42);
}

#[test]
fn solve_csv_lists_every_coefficient() {
    let o = fobie(&["solve", "--k", "1", "--lmax", "4", "--incident", "planewave", "--formulation", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "formulation,quantity,ell,m,re,im");
    let forms = csv_column(&text, "formulation");
    assert!(forms.iter().all(|f| f == "2"));
    let quantities = csv_column(&text, "quantity");
    for q in ["dn_es_1", "dn_es_2", "dn_es_3", "en"] {
        assert!(quantities.iter().any(|x| x == q));
    }
}

#[test]
fn tolerance_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "mp.json", MULTIPOLE);
    let o = fobie(&["solve", "--k", "1", "--incident", "multipole", "--multipole-file", &spec, "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("EXCEEDED"));
}

#[test]
fn sweep_minima_are_positive_and_clustering_is_finite() {
    let o = fobie(&["sweep", "--k-min", "0.1", "--k-max", "20", "--k-count", "60"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 61);
    assert!(csv_column(&text, "min_abs_lambda2").iter().all(|v| num(v) > 0.0));
    assert!(csv_column(&text, "min_abs_lambda1").iter().all(|v| num(v) > 0.0));
    assert!(csv_column(&text, "clustering_constant").iter().all(|v| num(v).is_finite()));
    let ks = csv_column(&text, "k");
    assert!((num(&ks[0]) - 0.1).abs() < 1e-14 && (num(&ks[59]) - 20.0).abs() < 1e-12);
}

#[test]
fn single_point_sweep_matches_the_spectrum() {
    let sweep = stdout(&fobie(&["sweep", "--k", "2.5", "--lmax", "80"]));
    let spec = stdout(&fobie(&["spectrum", "--k", "2.5", "--lmax", "80"]));
    let min_from_spec = |col: &str| csv_column(&spec, col).iter().map(|v| num(v)).fold(f64::INFINITY, f64::min);
    let rel = |a: f64, b: f64| (a - b).abs() / b;
    assert!(rel(num(&csv_column(&sweep, "min_abs_lambda1")[0]), min_from_spec("abs_lambda1")) < 1e-14);
    assert!(rel(num(&csv_column(&sweep, "min_abs_lambda2")[0]), min_from_spec("abs_lambda2")) < 1e-14);
    let tail: f64 = csv_column(&spec, "ell_abs_lambda2_minus_1")[50..].iter().map(|v| num(v)).fold(0.0, f64::max);
    assert!(rel(num(&csv_column(&sweep, "clustering_constant")[0]), tail) < 1e-14);
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &Path| -> Vec<String> {
        ["sweep", "--k-min", "0.5", "--k-max", "8", "--k-count", "9", "--lmax", "120", "--out", p.to_str().unwrap()]
            .iter()
            .map(|s| s.to_string())
            .collect()
    };
    let run = |p: &Path, threads: &str| {
        let v = args(p);
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        assert_eq!(fobie_env(&refs, threads).status.code(), Some(0));
        std::fs::read(p).unwrap()
    };
    assert_eq!(run(&a, "1"), run(&b, "4"));
    let s1 = stdout(&fobie(&["spectrum", "--k", "3", "--lmax", "30"]));
    let s2 = stdout(&fobie(&["spectrum", "--k", "3", "--lmax", "30"]));
    assert_eq!(s1, s2);
}

#[test]
fn config_file_with_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"k": 2.0, "lmax": 6, "eta": 5.0, "format": "json"}"#);
    let o = fobie(&["spectrum", "--config", &cfg, "--k", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["k"], 3.0);
    assert_eq!(v["eta"], 5.0);
    assert_eq!(v["lmax"], 6);

    let inline = format!(r#"{{"k": 1.0, "incident": "multipole", "multipole": {MULTIPOLE}}}"#);
    let cfg = write(dir.path(), "inline.json", &inline);
    assert_eq!(fobie(&["solve", "--config", &cfg]).status.code(), Some(0));

    let bad = write(dir.path(), "bad.json", r#"{"k": 1.0, "wavenumber": 2}"#);
    assert_eq!(fobie(&["spectrum", "--config", &bad]).status.code(), Some(2));
    assert_eq!(fobie(&["spectrum", "--config", "/nonexistent/cfg.json"]).status.code(), Some(2));
}

#[test]
fn invalid_multipole_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "l0.json", r#"{"terms": [{"l": 0, "m": 0, "a": [1, 0], "b": [0, 0]}]}"#);
    let o = fobie(&["solve", "--k", "1", "--incident", "multipole", "--multipole-file", &zero]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let spec = write(dir.path(), "mp.json", MULTIPOLE);
    let o = fobie(&["solve", "--k", "1", "--lmax", "3", "--incident", "multipole", "--multipole-file", &spec]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn exit_code_tracks_the_sign_of_k(k in -5.0f64..5.0, lmax in 0usize..6) {
        let o = fobie(&["spectrum", "--k", &k.to_string(), "--lmax", &lmax.to_string()]);
        let expected = if k > 0.0 && lmax >= 1 { 0 } else { 2 };
        prop_assert_eq!(o.status.code(), Some(expected));
    }
}
