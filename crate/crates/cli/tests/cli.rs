use std::path::Path;
use std::process::{Command, Output};

use compression_core::graph::CompressionGraph;
use compression_core::walk::Walk;
use compression_core::Rat;

fn compress(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_compress"))
        .args(args)
        .env_remove("COMPRESSION_OUT_DIR")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = compress(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn eval_prints_fraction_and_decimal() {
    assert_eq!(stdout(&["eval", "--stat", "mass", "--tuple", "2,3,6", "--m", "1"]), "1 (1.0)\n");
    assert_eq!(stdout(&["eval", "--stat", "gap_sq", "--tuple", "2,3"]), "337/36 (9.36111111111111)\n");
    assert_eq!(stdout(&["eval", "--stat", "cover_mass", "--s", "2", "--tuple", "2,3"]), "13/18 (0.7222222222222222)\n");
    assert_eq!(stdout(&["eval", "--stat", "mass", "--tuple", "1/2,3", "--m", "2"]), "14/3 (4.666666666666667)\n");
    assert_eq!(stdout(&["eval", "--stat", "mass", "--tuple", "0.5,4", "--float"]), "2.25\n");
}

#[test]
fn bad_input_exits_nonzero() {
    for args in [
        &["eval", "--stat", "mass", "--tuple", "1.5,2"][..],
        &["eval", "--stat", "mass", "--tuple", "0,2"],
        &["eval", "--stat", "nope", "--tuple", "2,3"],
        &["eval", "--stat", "cover_mass", "--tuple", "2,3"],
        &["eval", "--stat", "mass", "--tuple", "2,3", "--m", "0"],
        &["walk", "--start", "5,7", "--steps", "3"],
        &["search", "--theorem", "weak_erdos", "--n", "2", "--L", "1"],
        &["search", "--theorem", "bogus", "--n", "2", "--L", "3"],
        &["sweep", "--seed", "1"],
        &["frobnicate"],
    ] {
        let out = compress(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn erdos_straus_rows() {
    assert_eq!(stdout(&["experiment", "erdos-straus", "--n", "4"]), "n,x1,x2,x3\n4,2,3,6\n");
    let rows = stdout(&["experiment", "erdos-straus", "--n", "3..5"]);
    assert_eq!(rows, "n,x1,x2,x3\n3,1,4,12\n4,2,3,6\n5,2,4,20\n");
}

#[test]
fn walk_is_deterministic_and_round_trips_through_graph() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["walk", "--start", "5,7", "--m", "1", "--steps", "4", "--seed", "42"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let w: Walk<Rat> = Walk::from_json(&a).unwrap();
    assert_eq!(w.vertices.len(), 5);
    std::fs::write(dir.path().join("walk.json"), &a).unwrap();
    let g = stdout(&["graph", "--walk", &path(dir.path(), "walk.json")]);
    let g: CompressionGraph<Rat> = CompressionGraph::from_json(&g).unwrap();
    assert!(g.is_path());
    assert_eq!(g.order(), 5);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_compress"))
        .args(["walk", "--start", "2,3", "--steps", "1", "--seed", "0"])
        .env("COMPRESSION_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("walk.json")).unwrap();
    assert!(Walk::<Rat>::from_json(&text).is_ok());
}

#[test]
fn sweep_config_overrides_flags_and_writes_both_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    std::fs::write(&cfg, "samples = 300\ninequalities = [\"exact\"]\n").unwrap();
    let out = compress(&[
        "sweep", "--config", &cfg.to_string_lossy(), "--seed", "3", "--n-min", "2", "--n-max", "5",
        "--coord-max", "50", "--samples", "10", "--inequalities", "all", "--out", &path(dir.path(), "r"),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("r/sweep_report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.contains("mass_harmonic,HarmonicExact,300,"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r/sweep_report.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["samples"], 300);
    assert_eq!(json["config"]["seed"], 3);
}

#[test]
fn search_ranges_skip_infeasible_pairs() {
    let text = stdout(&["search", "--theorem", "weak_erdos", "--n", "3", "--L", "1..4"]);
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["value"], "47/60");
    assert_eq!(lines[1]["value"], "37/60");
    let p = stdout(&["search", "--theorem", "power_sum", "--n", "3", "--L", "1", "--s", "2"]);
    assert!(p.contains("\"169/144\""));
}

#[test]
fn experiments_emit_json() {
    let fam: serde_json::Value =
        serde_json::from_str(&stdout(&["experiment", "rational-distance", "--tuple", "2,3", "--depth", "3"])).unwrap();
    assert_eq!(fam["radii"], serde_json::json!(["337/72", "337/144", "337/216"]));
    let unit: serde_json::Value =
        serde_json::from_str(&stdout(&["experiment", "unit-distance", "--n", "2", "--count", "3", "--seed", "1"])).unwrap();
    assert!(unit["unit_pairs"].as_u64().unwrap() >= 3);
    let v: f64 = stdout(&["experiment", "anning", "--n", "2", "--cluster", "5", "--max-gap", "4"]).trim().parse().unwrap();
    assert!((v - 2f64.sqrt() * 65.0 / 12.0).abs() < 1e-12);
}
