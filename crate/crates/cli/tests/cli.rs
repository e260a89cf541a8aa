use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn lptwist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lptwist")).args(args).env_remove("LPTWIST_SEED").output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn validate_passes_on_good_files() {
    let out = lptwist(&["validate", path(&corpus("z2_sign.json")), path(&corpus("r3_coboundary.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["ok"], true);
    assert_eq!(r["results"]["passed"], 2);
}

#[test]
fn validate_reports_broken_cocycle_and_units() {
    let out = lptwist(&[
        "validate",
        path(&corpus("z3_trivial.json")),
        path(&corpus("broken_cocycle.json")),
        path(&corpus("bad_units.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let rows = r["tables"][0]["rows"].as_array().unwrap();
    let stages: Vec<&str> = rows.iter().map(|row| row[4].as_str().unwrap_or("")).collect();
    assert_eq!(stages, ["", "cocycle", "structure"]);
}

#[test]
fn missing_file_is_an_error() {
    let out = lptwist(&["weyl", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonexistent"));
    let out = lptwist(&["validate", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["tables"][0]["rows"][0][4], "parse");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for target in [&a, &b] {
        let out = lptwist(&["weyl", path(&corpus("r3_coboundary.json")), "--seed", "11", "--out", path(target)]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn rigidity_verdict_is_symmetric() {
    for (x, y) in
        [("rot2_0.json", "rot2_1.json"), ("z4_trivial.json", "z2xz2_trivial.json"), ("rot3_1.json", "rot3_2.json")]
    {
        let ab = json(&lptwist(&["rigidity", path(&corpus(x)), path(&corpus(y))]));
        let ba = json(&lptwist(&["rigidity", path(&corpus(y)), path(&corpus(x))]));
        assert_eq!(ab["results"]["verdict"], ba["results"]["verdict"], "{x} vs {y}");
        assert_eq!(ab["results"]["obstruction"], ba["results"]["obstruction"], "{x} vs {y}");
    }
}

#[test]
fn rigidity_distinguishes_nonisomorphic_groups() {
    let r = json(&lptwist(&["rigidity", path(&corpus("z4_trivial.json")), path(&corpus("z2xz2_trivial.json"))]));
    assert_eq!(r["results"]["verdict"], "OBSTRUCTED");
    assert_eq!(r["results"]["obstruction"], "pi0-mismatch");
}

#[test]
fn rigidity_refuses_p_two() {
    let out = lptwist(&["rigidity", path(&corpus("z2_sign.json")), path(&corpus("z2_sign.json")), "--p", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p ≠ 2"));
}

#[test]
fn seed_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_lptwist"))
        .args(["weyl", path(&corpus("r2_trivial.json"))])
        .env("LPTWIST_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(json(&out)["provenance"]["seed"], 42);
}

#[test]
fn csv_output_has_summary_block() {
    let out = lptwist(&["validate", path(&corpus("r3_trivial.json")), "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# summary\nkey,value\nok,true\n"));
    assert!(text.contains("# files\n"));
}

#[test]
fn weyl_rejects_non_principal_carrier() {
    let out = lptwist(&["weyl", path(&corpus("z2_trivial.json"))]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not principal"));
}

#[test]
fn nctorus_quotient_relation() {
    let r = json(&lptwist(&["nctorus", "--theta", "1/4"]));
    assert_eq!(r["ok"], true);
    assert_eq!(r["results"]["relation"]["uv_relation"], true);
    assert_eq!(r["results"]["relation"]["order"], 4);
}

#[test]
fn bad_theta_is_a_config_error() {
    assert_eq!(lptwist(&["nctorus", "--theta", "x/y"]).status.code(), Some(2));
    assert_eq!(lptwist(&["nctorus", "--theta", "0.3"]).status.code(), Some(2));
}

#[test]
fn pnorm_matches_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("m.json");
    std::fs::write(&file, r#"{"matrix": [[1, [0, 1]], [2, -1]]}"#).unwrap();
    let r = json(&lptwist(&["pnorm", path(&file), "--p", "3"]));
    let lower = r["results"]["lower"].as_f64().unwrap();
    let oracle = r["results"]["oracle"].as_f64().unwrap();
    assert!((lower - oracle).abs() < 1e-6);
}

#[test]
fn core_of_r3_is_the_diagonal() {
    let r = json(&lptwist(&["core", path(&corpus("r3_coboundary.json"))]));
    assert_eq!(r["results"]["core_dim"], 3);
    assert_eq!(r["results"]["equals_unit_diagonal"], true);
}
