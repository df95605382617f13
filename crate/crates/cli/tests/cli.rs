use std::path::Path;
use std::process::{Command, Output};

use riesz_core::verify::{from_jsonl, read_csv, read_jsonl_file, CheckReport};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .env_remove("RIESZ_SEED")
        .output()
        .expect("run verify")
}

fn reports(out: &Output) -> Vec<CheckReport> {
    from_jsonl(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

#[test]
fn parseval_harmonic_passes() {
    let out = verify(&["parseval", "--l", "5", "--m", "2", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = reports(&out);
    assert_eq!(r.len(), 1);
    assert!(r[0].passed);
    // sum_j ||D_j Y||^2 = l(l+1)
    assert!((r[0].lhs - 30.0).abs() < 1e-9);
}

#[test]
fn bernstein_monomial_is_sharp() {
    let out = verify(&[
        "bernstein",
        "--manifold",
        "circle",
        "--n",
        "8",
        "--p",
        "2",
        "--k",
        "1",
        "--f",
        "monomial",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = reports(&out);
    assert_eq!(r[0].ratio, 1.0);
    assert!(r[0].passed);
}

#[test]
fn missing_flag_is_usage_error() {
    let out = verify(&["parseval", "--l", "5", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    let out = verify(&["bernstein", "--manifold", "circle", "--p", "2", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_params_are_errors() {
    let out = verify(&["bernstein", "--manifold", "moebius", "--n", "3", "--p", "2", "--k", "1"]);
    assert_ne!(out.status.code(), Some(0));
    let out = verify(&[
        "bernstein",
        "--manifold",
        "circle",
        "--n",
        "3",
        "--p",
        "2",
        "--k",
        "1",
        "--f",
        "zonal",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let out = verify(&["parseval", "--l", "5", "--m", "2", "--k", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_suite_fails() {
    let out = verify(&["suite", "--name", "no-such-suite"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
    let out = verify(&["no-such-suite"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn malformed_config_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"suite": "circle-core", "sweeps": {"n": []}}"#).unwrap();
    let out = verify(&["suite", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep n is empty"));
    std::fs::write(&cfg, r#"{"suite": "circle-core", "colour": 3}"#).unwrap();
    let out = verify(&["suite", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

fn small_config(dir: &Path, seed: u64) -> std::path::PathBuf {
    let cfg = dir.join("cfg.json");
    let text = format!(
        r#"{{"suite": "circle-core", "seed": {seed}, "output_dir": {out:?},
            "sweeps": {{"n": [2, 5], "K": [100], "eps": [0.5], "k": [1, 2]}}}}"#,
        out = dir.join("out").to_str().unwrap()
    );
    std::fs::write(&cfg, text).unwrap();
    cfg
}

#[test]
fn suite_writes_reports_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), 42);
    let cfg = cfg.to_str().unwrap();
    let out = verify(&["circle-core", "--config", cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let jsonl = dir.path().join("out/report.jsonl");
    let first = std::fs::read(&jsonl).unwrap();
    let rs = read_jsonl_file(&jsonl).unwrap();
    assert!(rs.iter().all(|r| !r.asserted || r.passed));
    let csv = read_csv(std::fs::File::open(dir.path().join("out/report.csv")).unwrap()).unwrap();
    assert_eq!(csv, rs);
    assert!(dir.path().join("out/bernstein.svg").exists());

    let again = verify(&["suite", "--config", cfg]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(std::fs::read(&jsonl).unwrap(), first);
}

#[test]
fn seed_env_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), 42);
    let run = |env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_verify"));
        c.args(["circle-core", "--config", cfg.to_str().unwrap()]);
        match env {
            Some(v) => c.env("RIESZ_SEED", v),
            None => c.env_remove("RIESZ_SEED"),
        };
        let out = c.output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        read_jsonl_file(&dir.path().join("out/report.jsonl")).unwrap()
    };
    let base = run(None);
    let same = run(Some("42"));
    let other = run(Some("7"));
    assert_eq!(base, same);
    assert_ne!(base, other);
    let seeds: Vec<String> = other
        .iter()
        .filter_map(|r| r.params.get("seed"))
        .map(|v| v.to_string())
        .collect();
    assert!(!seeds.is_empty() && seeds.iter().all(|s| s == "7"));

    let bad = Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(["circle-core", "--config", cfg.to_str().unwrap()])
        .env("RIESZ_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn config_suite_must_match_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), 1);
    let out = verify(&["sphere-core", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn default_circle_core_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = verify(&["circle-core", "--output-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rs = read_jsonl_file(&dir.path().join("report.jsonl")).unwrap();
    assert!(rs.len() >= 50);
    assert!(rs
        .iter()
        .all(|r| r.params.get("seed").is_none_or(|s| s.to_string() == "1")));
}
