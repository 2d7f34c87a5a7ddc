use std::path::Path;
use std::process::{Command, Output};
use std::sync::OnceLock;

use gtoc12_core::synth::{fixture_catalog, FixtureSpec, SynthesisSpec, Synthesizer};
use gtoc12_core::{serialize_solution, AsteroidCatalog};
use serde_json::Value;

fn gtoc12(args: &[&str], files: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtoc12"))
        .args(args)
        .current_dir(files)
        .env_remove("GTOC12_CATALOG")
        .output()
        .unwrap()
}

fn catalog() -> &'static AsteroidCatalog {
    static CATALOG: OnceLock<AsteroidCatalog> = OnceLock::new();
    CATALOG.get_or_init(|| fixture_catalog(&FixtureSpec::default()))
}

fn solution() -> String {
    let doc = Synthesizer::new(catalog())
        .synthesize(&SynthesisSpec::default())
        .unwrap();
    serialize_solution(&doc).unwrap()
}

#[test]
fn valid_file_exits_zero_with_matching_json() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.txt"), solution()).unwrap();
    let out = gtoc12(&["validate", "--json", "s.txt"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], true);
    assert!(v["score"].as_f64().unwrap() > 0.0);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    assert!(v["message"].as_str().unwrap().starts_with("VALID J="));

    let text = gtoc12(&["validate", "s.txt"], dir.path());
    assert!(String::from_utf8_lossy(&text.stdout).contains("VALID J="));
}

#[test]
fn broken_file_exits_one_and_names_the_violation() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = solution();
    text.push('\n');
    std::fs::write(dir.path().join("s.txt"), text).unwrap();
    let out = gtoc12(&["validate", "--json", "s.txt"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["violations"][0]["kind"], "structural");
    assert!(v["message"].as_str().unwrap().starts_with("INVALID"));
}

#[test]
fn exit_codes_for_io_catalog_and_usage() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.txt"), "1 0 64500 0 0 0 0 0 0 1000\n").unwrap();
    std::fs::write(dir.path().join("bad.cat"), "header\n1 2 3\n").unwrap();
    assert_eq!(
        gtoc12(&["validate", "missing.txt"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gtoc12(&["--catalog", "bad.cat", "validate", "s.txt"], dir.path())
            .status
            .code(),
        Some(3)
    );
    assert_eq!(gtoc12(&["validate"], dir.path()).status.code(), Some(4));
    assert_eq!(gtoc12(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn fixture_synth_and_validate_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = gtoc12(&["fixture", "--out", "cat.txt"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let out = gtoc12(
        &[
            "--catalog",
            "cat.txt",
            "synth",
            "--seed",
            "5",
            "--out",
            "s.txt",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = gtoc12(&["--catalog", "cat.txt", "score", "s.txt"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("J="));
    // The catalog file and the built-in one are the same table.
    let from_file = gtoc12(
        &["--catalog", "cat.txt", "validate", "--json", "s.txt"],
        dir.path(),
    );
    let built_in = gtoc12(&["validate", "--json", "s.txt"], dir.path());
    assert_eq!(from_file.stdout, built_in.stdout);
}

#[test]
fn dynamic_mode_scores_lower() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.txt"), solution()).unwrap();
    let score = |mode: &str| {
        let out = gtoc12(&["validate", "--json", "--mode", mode, "s.txt"], dir.path());
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v["score"].as_f64().unwrap()
    };
    assert!(score("dynamic") < score("static"));
}

#[test]
fn ephemeris_of_earth_at_its_reference_epoch() {
    let dir = tempfile::tempdir().unwrap();
    let out = gtoc12(&["ephem", "earth", "64328"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let fields: Vec<f64> = String::from_utf8_lossy(&out.stdout)
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(fields.len(), 7);
    let r = (fields[1].powi(2) + fields[2].powi(2) + fields[3].powi(2)).sqrt();
    assert!((r / 1.49597870691e8 - 1.0).abs() < 0.02);
    assert_eq!(
        gtoc12(&["ephem", "pluto", "64328"], dir.path())
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn lint_flags_double_spaces() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.txt"), "1  0 64500 0 0 0 0 0 0 1000\n").unwrap();
    let out = gtoc12(&["lint", "s.txt"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("line 1"));
}

#[test]
fn minimal_and_single_burn_files() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["synth", "--ships", "1", "--mining-ships", "0"];
    let out = gtoc12(
        &[&base[..], &["--burns", "0", "--out", "a.txt"]].concat(),
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("a.txt")).unwrap();
    assert_eq!(text.lines().count(), 2);
    let v: Value =
        serde_json::from_slice(&gtoc12(&["validate", "--json", "a.txt"], dir.path()).stdout)
            .unwrap();
    assert_eq!(v["valid"], true);
    assert_eq!(v["score"], 0.0);

    let out = gtoc12(
        &[&base[..], &["--burns", "1", "--out", "b.txt"]].concat(),
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("b.txt")).unwrap();
    assert!(text.lines().any(|l| l.starts_with("1 -1 ")));
    assert_eq!(
        gtoc12(&["validate", "b.txt"], dir.path()).status.code(),
        Some(0)
    );
}

#[test]
fn asteroid_ephemeris_matches_the_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let out = gtoc12(&["ephem", "1", "64328"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let fields: Vec<f64> = String::from_utf8_lossy(&out.stdout)
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    let el = catalog().get(1).unwrap();
    let s =
        gtoc12_core::elements_to_state(el, 1.32712440018e11, gtoc12_core::Epoch::from_mjd(64328.0))
            .unwrap();
    assert_eq!(&fields[1..4], s.position.as_slice());
    assert_eq!(&fields[4..7], s.velocity.as_slice());
    assert_eq!(
        gtoc12(&["ephem", "99999", "64328"], dir.path())
            .status
            .code(),
        Some(4)
    );
}
