//! End-to-end runs of the `tsteer` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn tsteer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsteer")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn out_path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn analyze(state: &str) -> (i32, Option<Value>, String) {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "state.json", state);
    let report = out_path(&dir, "report.json");
    let out = tsteer(&["analyze", "--in", &input, "--out", &report]);
    let json = std::fs::read_to_string(&report).ok().map(|t| serde_json::from_str(&t).unwrap());
    (out.status.code().unwrap(), json, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn analyze_werner() {
    let (code, report, _) = analyze(r#"{"family":{"name":"werner","params":{"alpha":0.7}}}"#);
    assert_eq!(code, 0);
    let report = report.unwrap();
    assert!((report["f_value"].as_f64().unwrap() - 0.7).abs() < 1e-12);
    assert_eq!(report["steerable"], Value::Bool(true));
}

#[test]
fn analyze_isotropic_correlation() {
    let (code, report, _) = analyze(r#"{"correlation":[[0.4,0,0],[0,-0.4,0],[0,0,0.4]]}"#);
    assert_eq!(code, 0);
    let report = report.unwrap();
    assert!((report["f_value"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    assert_eq!(report["steerable"], Value::Bool(false));
}

#[test]
fn analyze_error_codes() {
    // |00><00| has both Bloch vectors along z
    let mut density = vec!["[0,0]"; 16];
    density[0] = "[1,0]";
    let (code, report, stderr) = analyze(&format!(r#"{{"density":[{}]}}"#, density.join(",")));
    assert_eq!(code, 3);
    assert!(report.is_none());
    let line: Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(line["exit_code"], 3);
    assert!(line["reason"].is_string());

    let (code, _, stderr) = analyze("{ not json");
    assert_eq!(code, 2);
    assert!(serde_json::from_str::<Value>(stderr.trim()).is_ok());

    let out = tsteer(&["analyze", "--in", "/nonexistent/state.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(tsteer(&["sweep", "--res", "1"]).status.code(), Some(2));
    assert_eq!(tsteer(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn sweep_points_and_reruns() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (out_path(&dir, "a.csv"), out_path(&dir, "b.csv"));
    assert_eq!(tsteer(&["sweep", "--res", "11", "--out", &a]).status.code(), Some(0));
    assert_eq!(tsteer(&["sweep", "--res", "11", "--out", &b]).status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(dir.path().join("a.plot.py").exists());

    let rows = csv_rows(Path::new(&a));
    assert_eq!(rows[0], ["alpha", "eta", "f_value", "concurrence", "phase"]);
    assert_eq!(rows.len(), 1 + 11 * 10);
    let phase = |alpha: f64, eta: f64| {
        rows[1..]
            .iter()
            .find(|r| {
                (r[0].parse::<f64>().unwrap() - alpha).abs() < 1e-12 && (r[1].parse::<f64>().unwrap() - eta).abs() < 1e-12
            })
            .map(|r| r[4].clone())
            .unwrap()
    };
    assert_eq!(phase(1.0, 0.0), "steerable");
    assert_eq!(phase(0.4, 0.0), "entangled-unsteerable");
    assert_eq!(phase(0.3, 0.0), "separable");
}

#[test]
fn scatter_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (out_path(&dir, "a.csv"), out_path(&dir, "b.csv"));
    for path in [&a, &b] {
        let out = tsteer(&["scatter", "--samples", "2000", "--seed", "3", "--out", path]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let rows = csv_rows(Path::new(&a));
    assert_eq!(rows[0], ["concurrence", "f_value"]);
    assert_eq!(rows.len(), 2001);
    for r in &rows[1..] {
        let (e, f): (f64, f64) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        if e == 0.0 {
            assert!(f <= 0.5 + 1e-6);
        }
    }
}

#[test]
#[allow(clippy::approx_constant)]
fn bounds_table() {
    let dir = TempDir::new().unwrap();
    let path = out_path(&dir, "bounds.csv");
    assert_eq!(tsteer(&["bounds", "--out", &path]).status.code(), Some(0));
    let rows = csv_rows(Path::new(&path));
    assert_eq!(rows[0], ["geometry", "n", "c_n"]);
    let value = |name: &str| rows.iter().find(|r| r[0] == name).map(|r| r[2].parse::<f64>().unwrap()).unwrap();
    assert!((value("orthogonal-2") - 0.70711).abs() <= 1e-5);
    assert!((value("cube-diagonals-4") - 0.57735).abs() <= 1e-5);
    assert!((value("icosahedron-6") - 0.5393).abs() <= 5e-4);
    let limit = rows.last().unwrap();
    assert_eq!(limit[1], "inf");
    assert!((limit[2].parse::<f64>().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn verify_verdicts() {
    for seed in 1..=10 {
        let out = tsteer(&["verify", "--seed", &seed.to_string()]);
        assert_eq!(out.status.code(), Some(0), "seed {seed}: {}", String::from_utf8_lossy(&out.stdout));
    }
    let out = tsteer(&["verify", "--inject-fault", "scaling"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn config_file_loses_to_flags() {
    let dir = TempDir::new().unwrap();
    let csv = out_path(&dir, "sweep.csv");
    let config = write(&dir, "run.toml", &format!("res = 3\nout = {csv:?}\n"));
    assert_eq!(tsteer(&["sweep", "--config", &config]).status.code(), Some(0));
    assert_eq!(csv_rows(Path::new(&csv)).len(), 1 + 3 * 2);
    assert_eq!(tsteer(&["sweep", "--config", &config, "--res", "4"]).status.code(), Some(0));
    assert_eq!(csv_rows(Path::new(&csv)).len(), 1 + 4 * 3);

    let bad = write(&dir, "bad.toml", "resolution = 3\n");
    assert_eq!(tsteer(&["sweep", "--config", &bad]).status.code(), Some(2));
}
