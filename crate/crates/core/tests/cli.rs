use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noisy-fourier")).current_dir(dir).args(args).output().unwrap()
}

fn ok_json(dir: &Path, args: &[&str]) -> Value {
    let out = run(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn gen_structure_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let rec = ok_json(d, &["gen", "--kind", "fig1a", "--n", "3", "--d", "3", "--seed", "5", "--out", "a.json"]);
    assert!(rec["metrics"]["m"].as_u64().unwrap() >= 9);
    let file: Value = serde_json::from_str(&fs::read_to_string(d.join("a.json")).unwrap()).unwrap();
    assert_eq!(file["twirl_sites"].as_array().unwrap().len(), 9);

    ok_json(d, &["gen", "--kind", "fig1b", "--n", "2", "--t", "3", "--seed", "7", "--out", "b.json"]);
    ok_json(d, &["gen", "--kind", "fig1b", "--n", "2", "--t", "3", "--seed", "7", "--out", "b2.json"]);
    let b = fs::read(d.join("b.json")).unwrap();
    assert_eq!(b, fs::read(d.join("b2.json")).unwrap());
    let file: Value = serde_json::from_slice(&b).unwrap();
    assert_eq!(file["twirl_sites"].as_array().unwrap().len(), 3);
    assert_eq!(file["kind"], "clifford_perfect_t");
}

#[test]
fn oracle_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok_json(d, &["gen", "--kind", "fig1b", "--n", "2", "--t", "2", "--seed", "3", "--epsilon", "0.1", "--out", "c.json"]);
    let rec = ok_json(d, &["oracle", "--circuit", "c.json", "--epsilon", "0"]);
    assert_eq!(rec["metrics"]["q"], rec["metrics"]["q_noisy"]);
    let rec = ok_json(d, &["oracle", "--circuit", "c.json", "--y", "1001", "--joint", "--spectrum", "s.jsonl"]);
    let m = &rec["metrics"];
    assert_eq!(m["in_range"], true);
    assert_eq!(m["parseval"]["pass"], true);
    assert_eq!(m["joint"].as_object().unwrap().len(), 16);
    let lines = fs::read_to_string(d.join("s.jsonl")).unwrap();
    assert_eq!(lines.lines().count() as u64, m["spectrum_entries"].as_u64().unwrap());
    let q = floats(&m["q_noisy"]);
    assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("bad.json"), "{\"n\": 2, \"gates\": 5}").unwrap();
    let out = run(d, &["oracle", "--circuit", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("circuit file"));

    assert_eq!(run(d, &["oracle", "--circuit", "missing.json"]).status.code(), Some(2));
    assert_eq!(run(d, &["gen", "--kind", "fig1a", "--n", "2", "--out", "no/such/dir/x.json"]).status.code(), Some(2));
    assert_eq!(run(d, &["gen", "--kind", "fig1a", "--n", "0", "--out", "x.json"]).status.code(), Some(1));
    assert_eq!(run(d, &["oracle"]).status.code(), Some(1));

    ok_json(d, &["gen", "--kind", "fig1a", "--n", "13", "--d", "1", "--out", "big.json"]);
    assert_eq!(run(d, &["oracle", "--circuit", "big.json"]).status.code(), Some(3));

    ok_json(d, &["gen", "--kind", "fig1b", "--n", "3", "--t", "40", "--seed", "1", "--epsilon", "0.1", "--out", "long.json"]);
    let out = run(d, &["approx", "--circuit", "long.json", "--l", "6"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));

    ok_json(d, &["gen", "--kind", "fig1a", "--n", "2", "--d", "2", "--out", "noisy.json"]);
    assert_eq!(run(d, &["approx", "--circuit", "noisy.json", "--l", "2"]).status.code(), Some(1));
}

#[test]
fn approx_against_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok_json(d, &["gen", "--kind", "fig1b", "--n", "3", "--t", "3", "--seed", "11", "--e1", "0.1", "--e2", "0.2", "--out", "c.json"]);
    let y = "011010";
    let zero = ok_json(d, &["approx", "--circuit", "c.json", "--y", y, "--x", "010", "--l", "0"]);
    assert_eq!(zero["metrics"]["pseudo_probability"].as_f64(), Some(0.0));

    let full = ok_json(d, &["approx", "--circuit", "c.json", "--y", y, "--l", "full", "--clip"]);
    let oracle = ok_json(d, &["oracle", "--circuit", "c.json", "--y", y]);
    let p = floats(&full["metrics"]["pseudo_probabilities"]);
    let q = floats(&oracle["metrics"]["q_noisy"]);
    for (a, b) in p.iter().zip(&q) {
        assert!((a - b).abs() < 1e-9);
    }
    assert_eq!(full["budgets"][0]["enumerated"].as_u64(), Some(64));

    let rec = ok_json(d, &["approx", "--delta", "0.01", "--eta", "0.01", "--epsilon", "0.1", "--r", "1"]);
    let l = rec["metrics"]["choose_l"]["l"].as_i64().unwrap();
    assert!((l - 39).abs() <= 1);
}

#[test]
fn sweeps_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let rec = ok_json(
        d,
        &["theorem1", "--n", "2", "--d", "2,3,4,5,6", "--epsilon", "0.15", "--samples", "60", "--csv", "t.csv"],
    );
    let m = &rec["metrics"];
    assert_eq!(m["monotone_nonincreasing"], true);
    assert_eq!(m["points"].as_array().unwrap().len(), 5);
    let csv = fs::read_to_string(d.join("t.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("seed,y,delta_y,threshold,pass"));
    assert_eq!(csv.lines().count(), 1 + 5 * 60);

    ok_json(d, &["gen", "--kind", "fig1b", "--n", "2", "--t", "3", "--seed", "2", "--epsilon", "0.1", "--out", "c.json"]);
    let rec = ok_json(d, &["stats", "--circuit", "c.json", "--l", "1,2,3,4,5", "--csv", "s.csv"]);
    assert_eq!(rec["metrics"]["all_pass"], true);
    let csv = fs::read_to_string(d.join("s.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("l,delta0,Delta,bound,pass"));
    assert_eq!(csv.lines().count(), 6);

    let rec = ok_json(d, &["anticoncentration", "--ensemble", "clifford", "--n", "2", "--samples", "3000", "--seed", "4"]);
    let est = rec["metrics"]["estimate"].as_f64().unwrap();
    let se = rec["metrics"]["std_error"].as_f64().unwrap();
    assert!((est - 1.6).abs() <= 3.0 * se, "{est} ± {se}");
}

#[test]
fn config_file_replays_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["--save-config", "cfg.json", "gen", "--kind", "fig1a", "--n", "2", "--d", "2", "--seed", "9", "--out", "x.json"];
    let first = ok_json(d, &args);
    let x1 = fs::read(d.join("x.json")).unwrap();
    fs::remove_file(d.join("x.json")).unwrap();
    let second = ok_json(d, &["--config", "cfg.json", "--threads", "1"]);
    assert_eq!(first["experiment_id"], second["experiment_id"]);
    assert_eq!(first["config"], second["config"]);
    assert_eq!(x1, fs::read(d.join("x.json")).unwrap());
    assert_eq!(run(d, &["--config", "cfg.json", "gen", "--kind", "fig1a", "--n", "2", "--out", "y.json"]).status.code(), Some(1));
}
