use std::f64::consts::{FRAC_PI_2, PI};

use assert_cmd::Command;

fn atlas() -> Command {
    Command::cargo_bin("ap-atlas").unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = atlas().args(args).assert().success().get_output().stdout.clone();
    String::from_utf8(out).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn eval_examples() {
    let out = stdout_of(&["eval", "--family", "radial", "--a", "2", "--point", "2,0"]);
    assert_eq!(out, "x1,x2,u\n2,0,1\n");
    let out = stdout_of(&["eval", "--family", "half-plane", "--gamma", "1", "--point", "0,3", "--point", "0,-3"]);
    let r = rows(&out);
    assert_eq!(num(&r[0][2]), 4.5);
    assert_eq!(num(&r[1][2]), 0.0);
    let out = stdout_of(&["eval", "--family", "cone", "--a", "0.5", "--c", "1", "--point", "1,1"]);
    // r = √2 and Υ(π/4) = 1 there, so u = (2√2)^(1/2) · 2^(1/4) = 2
    assert!((num(&rows(&out)[0][2]) - 2.0).abs() < 1e-8);
    let out = stdout_of(&["eval", "--family", "explicit-a2", "--m", "1", "--point", "2,1"]);
    assert!((num(&rows(&out)[0][2]) - 2.5).abs() < 1e-12);
}

#[test]
fn eval_json() {
    let out = stdout_of(&["--format", "json", "eval", "--family", "half-plane", "--a", "2", "--point", "0,3"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["values"][0]["u"], 4.5);
}

#[test]
fn domain_errors_exit_2() {
    atlas().args(["eval", "--family", "radial", "--a", "0.5", "--point", "1,0"]).assert().code(2);
    atlas().args(["eval", "--family", "cone", "--a", "0.75", "--c", "1", "--point", "1,0"]).assert().code(2);
    atlas().args(["eval", "--family", "radial", "--a", "2", "--gamma", "1", "--point", "1,0"]).assert().code(2);
    atlas().args(["figures", "9"]).assert().code(2);
    atlas().args(["tstar", "--a", "2", "--m", "-1"]).assert().code(2);
}

#[test]
fn tstar_table() {
    let out = stdout_of(&["tstar", "--a", "2", "--m", "1,0,1"]);
    assert!(out.starts_with("m,y_star,t_star,admissible,error\n"));
    let r = rows(&out);
    assert_eq!(r.len(), 2, "m values are sorted and deduplicated");
    assert_eq!(num(&r[0][2]), num("1.57079633"));
    assert!((num(&r[1][1]) - ((1.0 + 5f64.sqrt()) / 2.0).sqrt()).abs() < 1e-8);
    assert!((num(&r[1][2]) - (PI - 2f64.atan()) / 2.0).abs() < 1e-8);
}

#[test]
fn tstar_partial_failure_reports_rows() {
    let out = stdout_of(&["tstar", "--a", "2", "--m", "-1,1"]);
    let r = rows(&out);
    assert_eq!(r.len(), 2);
    assert!(!r[0][4].is_empty(), "failed row carries an error message");
    assert!(r[1][4].is_empty());
}

#[test]
fn profile_at_m_zero_is_sine() {
    let out = stdout_of(&["profile", "--a", "0.75", "--m", "0", "--samples", "40"]);
    let r = rows(&out);
    assert_eq!(r.len(), 41);
    for row in r {
        let t = num(&row[0]);
        assert!((num(&row[1]) - t.sin()).abs() < 1e-8);
        assert!((num(&row[2]) - t.cos()).abs() < 1e-6);
    }
}

#[test]
fn verify_suites_pass() {
    let out = atlas().args(["verify", "--suite", "closed-forms"]).assert().success().get_output().clone();
    assert_eq!(rows(&String::from_utf8(out.stdout).unwrap()).len(), 12);
    assert!(String::from_utf8(out.stderr).unwrap().contains("12 checks, 0 failed"));
    let out = stdout_of(&["--format", "json", "verify", "--suite", "negative-controls"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let checks = v.as_array().or_else(|| v["checks"].as_array()).expect("check list");
    assert_eq!(checks.len(), 5);
    assert!(checks.iter().all(|c| c["pass"] == true));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"family": "radial", "a": 2, "points": [[2, 0]]}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(stdout_of(&["--config", cfg, "eval"]), "x1,x2,u\n2,0,1\n");
    // the flag overrides the file value
    let out = stdout_of(&["--config", cfg, "eval", "--family", "half-plane"]);
    assert_eq!(num(&rows(&out)[0][2]), 0.0);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"colour": "blue"}"#).unwrap();
    atlas().args(["--config", bad.to_str().unwrap(), "eval"]).assert().code(2);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    atlas().args(["--out", path.to_str().unwrap(), "tstar", "--a", "0.5", "--m", "2"]).assert().success();
    let r = rows(&std::fs::read_to_string(&path).unwrap());
    assert!((num(&r[0][2]) - (1f64.atan() + FRAC_PI_2)).abs() < 1e-8);
}

#[test]
fn figures_are_deterministic_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        atlas().args(["--out", d.to_str().unwrap(), "figures", "4"]).assert().success();
    }
    let mut names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.iter().any(|n| n == "figure4_c1.svg"));
    for n in &names {
        assert_eq!(std::fs::read(a.join(n)).unwrap(), std::fs::read(b.join(n)).unwrap(), "{n:?} differs");
    }
    let svg = std::fs::read_to_string(a.join("figure4_c1.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn figure_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    atlas()
        .args(["--out", out, "figures", "6", "--override", "m=1", "--override", "samples=10"])
        .assert()
        .success();
    let csv: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    assert_eq!(csv.len(), 1);
    assert_eq!(std::fs::read_to_string(&csv[0]).unwrap().lines().count(), 12);
    atlas().args(["--out", out, "figures", "6", "--override", "samples=11"]).assert().code(2);
    atlas().args(["--out", out, "figures", "6", "--override", "colour=red"]).assert().code(2);
}
