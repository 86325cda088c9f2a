use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use dioph::gutkin::{ClassificationReport, Solutions};

fn dioph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dioph"))
        .args(args)
        .env_remove("DIOPH_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = dioph(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stderr));
    });
    (v, code(&out))
}

fn starts(v: &Value, prefix: &str) -> bool {
    v.as_str().is_some_and(|s| s.starts_with(prefix))
}

#[test]
fn solve_four() {
    let (v, c) = json(&["solve", "--n", "4"]);
    assert_eq!(c, 0);
    assert_eq!(v["command"], "solve");
    assert_eq!(v["precision_bits"], 256);
    assert_eq!(v["hprime_convention"], "1");
    let sols = v["payload"]["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 1);
    assert_eq!(sols[0]["t"]["minpoly"], "-5 0 1");
    assert_eq!(sols[0]["beta"]["minpoly"], "3 0 4 0 3");
    assert!(starts(&sols[0]["alpha"]["mid"], "1.1502619915109314913"));
    let back: Solutions = serde_json::from_value(v["payload"].clone()).unwrap();
    assert_eq!(back.solutions[0].t.minpoly().to_string(), "-5 0 1");
}

#[test]
fn solve_empty_and_invalid() {
    let (v, c) = json(&["solve", "--n", "2"]);
    assert_eq!(c, 1);
    assert!(v["payload"]["solutions"].as_array().unwrap().is_empty());
    assert_eq!(code(&dioph(&["solve", "--n", "3"])), 1);
    assert_eq!(code(&dioph(&["solve", "--n", "1"])), 3);
    assert_eq!(code(&dioph(&["solve", "--n", "-4"])), 3);
}

#[test]
fn analyze_four_round_trips() {
    let (v, c) = json(&["analyze", "--n", "4", "--index", "0", "--qmax", "5000"]);
    assert_eq!(c, 0);
    let p = &v["payload"];
    assert_eq!(p["verification"]["passed"], true);
    assert_eq!(p["cert"]["d"], 4);
    assert!(starts(&p["cert"]["ln_c"]["mid"], "-812606506736.29333"));
    assert!(p["cert"].get("c").is_none());
    assert!(starts(&p["height"]["h"]["mid"], "0.27465307216702742284881130923"));
    let report: ClassificationReport = serde_json::from_value(p.clone()).unwrap();
    assert_eq!(serde_json::to_value(&report).unwrap(), *p);
}

#[test]
fn analyze_errors() {
    assert_eq!(code(&dioph(&["analyze", "--n", "4", "--index", "1"])), 4);
    assert_eq!(code(&dioph(&["analyze", "--n", "0"])), 3);
    assert_eq!(code(&dioph(&["analyze", "--n", "4", "--qmax", "0"])), 3);
}

#[test]
fn analyze_five() {
    let (v, c) = json(&["analyze", "--n", "5", "--index", "0", "--qmax", "2000"]);
    assert_eq!(c, 0);
    assert_eq!(v["payload"]["solution"]["beta"]["minpoly"], "2 0 1 0 2");
    assert!(starts(&v["payload"]["height"]["h"]["mid"], "0.17328679513998632735430803036"));
}

#[test]
fn heights() {
    let (v, c) = json(&["height", "--poly", "-7 3", "--hint", "2.33"]);
    assert_eq!(c, 0);
    assert_eq!(v["hprime_convention"], "pi");
    assert!(starts(&v["payload"]["height"]["h"]["mid"], "1.945910149055313305105352"));

    let (v, _) = json(&["height", "--poly", "1 1", "--hint", "-1"]);
    assert_eq!(v["payload"]["height"]["h"]["mid"], "0");
    assert!(starts(&v["payload"]["height"]["h_mod"]["mid"], "3.14159265358979323846"));
    let (v, _) = json(&["height", "--poly", "1 1", "--hint", "-1", "--hprime-minus-one", "1"]);
    assert_eq!(v["payload"]["height"]["h_mod"]["mid"], "1");

    let (v, _) = json(&["height", "--poly", "3 0 4 0 3", "--hint", "0.408+0.912i"]);
    assert!(starts(&v["payload"]["height"]["h"]["mid"], "0.27465307216702742284881130923"));
    assert_eq!(v["payload"]["height"]["degree"], 4);
}

#[test]
fn height_errors() {
    assert_eq!(code(&dioph(&["height", "--poly", "-7 3", "--hint", "5"])), 3);
    assert_eq!(code(&dioph(&["height", "--poly", "x^2", "--hint", "1"])), 3);
    assert_eq!(code(&dioph(&["height", "--poly", "1 0 1", "--hint", "0.1+0.1i +/- 2"])), 3);
    assert_eq!(code(&dioph(&["height", "--poly", "5", "--hint", "1"])), 3);
}

#[test]
fn continued_fractions() {
    let (v, c) = json(&["cf", "--gutkin", "4,0", "--terms", "40"]);
    assert_eq!(c, 0);
    let cf = &v["payload"]["cf"];
    assert!(cf["certified_terms"].as_u64().unwrap() >= 40);
    let q: Vec<&str> = cf["quotients"].as_array().unwrap()[..8].iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(q, ["0", "5", "2", "6", "6", "1", "3", "13"]);

    let (v, c) = json(&["cf", "--poly", "1 1", "--hint", "-1"]);
    assert_eq!(c, 0);
    assert_eq!(v["payload"]["theta"]["mid"], "0.5");
    assert_eq!(v["payload"]["cf"]["quotients"], serde_json::json!(["0", "2"]));

    assert_eq!(code(&dioph(&["cf", "--gutkin", "2,0"])), 4);
    assert_eq!(code(&dioph(&["cf", "--gutkin", "four"])), 3);
}

#[test]
fn cf_of_unit_circle_point() {
    // i has argument π/2, so θ = 1/4; the CF needs the exact tie handling
    let (v, c) = json(&["cf", "--poly", "1 0 1", "--hint", "0.1+1.1i", "--terms", "10"]);
    assert_eq!(c, 0);
    let cf = &v["payload"]["cf"];
    assert!(cf["certified_terms"].as_u64().unwrap() >= 1);
    assert_eq!(cf["quotients"][0], "0");
}

#[test]
fn deterministic_payloads() {
    let a = dioph(&["--json", "analyze", "--n", "4", "--qmax", "3000"]);
    let b = dioph(&["--json", "analyze", "--n", "4", "--qmax", "3000"]);
    assert_eq!(a.stdout, b.stdout);
}

fn cached(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dioph"))
        .args(args)
        .env("DIOPH_CACHE_DIR", dir)
        .output()
        .unwrap()
}

#[test]
fn cache_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--json", "analyze", "--n", "4", "--qmax", "3000"];
    let first = cached(dir.path(), &args);
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let second = cached(dir.path(), &args);
    assert_eq!(code(&first), 0);
    assert_eq!(code(&second), 0);
    assert_eq!(first.stdout, second.stdout);

    // a different precision is a different key
    cached(dir.path(), &["--json", "--prec-bits", "200", "analyze", "--n", "4", "--qmax", "3000"]);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);

    // exit codes survive the cache, and errors are not stored
    assert_eq!(code(&cached(dir.path(), &["solve", "--n", "2"])), 1);
    assert_eq!(code(&cached(dir.path(), &["solve", "--n", "2"])), 1);
    assert_eq!(code(&cached(dir.path(), &["solve", "--n", "1"])), 3);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 3);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = dioph(&["--json", "--out", path.to_str().unwrap(), "solve", "--n", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
    let summary = dioph(&["solve", "--n", "5"]);
    assert!(String::from_utf8_lossy(&summary.stdout).contains("-5 0 3"));
}
