use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-mirror"))
        .args(args)
        .current_dir(examples())
        .output()
        .expect("binary runs")
}

fn vertex_set(v: &Value) -> BTreeSet<Vec<i64>> {
    serde_json::from_value::<Vec<Vec<i64>>>(v["vertices"].clone())
        .unwrap()
        .into_iter()
        .collect()
}

#[test]
fn golden_outputs_match_byte_for_byte() {
    let cases = fs::read_to_string(examples().join("cases.txt")).unwrap();
    let mut count = 0;
    for line in cases
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
    {
        let mut parts = line.split_whitespace();
        let name = parts.next().unwrap();
        let args: Vec<&str> = parts.collect();
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let golden = fs::read(examples().join(format!("{name}.golden.json"))).unwrap();
        assert_eq!(out.stdout, golden, "{name} differs from its golden output");
        count += 1;
    }
    assert!(count >= 20);
}

#[test]
fn repeated_runs_are_identical() {
    let a = run(&["secondary", "square_center.json", "--chambers"]);
    let b = run(&["secondary", "square_center.json", "--chambers"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn polar_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for input in ["quintic.json", "hexagon.json", "cube.json", "square.json"] {
        let once = dir.path().join("once.json");
        let twice = dir.path().join("twice.json");
        assert!(run(&["polar", input, "--out", once.to_str().unwrap()])
            .status
            .success());
        assert!(run(&[
            "polar",
            once.to_str().unwrap(),
            "--out",
            twice.to_str().unwrap()
        ])
        .status
        .success());
        let original: Value =
            serde_json::from_str(&fs::read_to_string(examples().join(input)).unwrap()).unwrap();
        let back: Value = serde_json::from_str(&fs::read_to_string(&twice).unwrap()).unwrap();
        assert_eq!(vertex_set(&original), vertex_set(&back), "{input}");
        assert_eq!(original["lattice"], back["lattice"]);
    }
}

#[test]
fn chamber_listing_has_one_geometric_phase() {
    let out = run(&["secondary", "p2_anticanonical.json", "--chambers"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let chambers = v["chambers"].as_array().unwrap();
    assert_eq!(chambers.len(), 2);
    assert_eq!(
        chambers
            .iter()
            .filter(|c| c["phase"] == "geometric")
            .count(),
        1
    );
}

#[test]
fn malformed_input_exits_with_one() {
    assert_eq!(run(&["polar", "truncated.json"]).status.code(), Some(1));
    assert_eq!(run(&["polar", "no_such_file.json"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate", "square.json"]).status.code(), Some(1));
    assert_eq!(run(&["polar"]).status.code(), Some(1));
    assert_eq!(
        run(&["phase", "p2_anticanonical.json"]).status.code(),
        Some(1)
    );
    // a polytope document where a fan is expected
    assert_eq!(run(&["roots", "square.json"]).status.code(), Some(1));
    let out = run(&["polar", "truncated.json"]);
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());
}

#[test]
fn violated_preconditions_exit_with_two() {
    assert_eq!(run(&["mdmm", "big_triangle.json"]).status.code(), Some(2));
    assert_eq!(
        run(&["classify", "big_triangle.json"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["points", "segment.json"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_toric-mirror"))
        .args(["secondary", "square_center.json", "--chambers"])
        .current_dir(examples())
        .env("TORIC_MIRROR_MAX_POINTS", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn max_points_variable_must_be_a_count() {
    let out = Command::new(env!("CARGO_BIN_EXE_toric-mirror"))
        .args(["secondary", "square_center.json", "--chambers"])
        .current_dir(examples())
        .env("TORIC_MIRROR_MAX_POINTS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_cleanly() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("mdmm"));
}
