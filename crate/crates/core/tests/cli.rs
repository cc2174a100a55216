use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qdist(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdist"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn qdist")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr_error(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().expect("error line on stderr");
    serde_json::from_str(line).unwrap()
}

#[test]
fn metrics_exemplars_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdist(dir.path(), &["metrics", "--exemplar", "tetra", "--out", "tetra.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&dir.path().join("tetra.json"));
    assert!((report["deviation"].as_f64().unwrap() - 0.1453).abs() < 1e-4);
    let manifest = json(&dir.path().join("tetra.json.manifest.json"));
    assert_eq!(manifest["command"], "metrics");
    assert_eq!(manifest["outputs"][0], "tetra.json");

    let out = qdist(dir.path(), &["metrics", "--exemplar", "trine"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((report["avg_set"].as_f64().unwrap() - 5.0 / 6.0).abs() < 1e-6);
    assert!(dir.path().join("metrics.manifest.json").exists());
}

#[test]
fn metrics_from_states_file() {
    let dir = tempfile::tempdir().unwrap();
    let half = r#"[[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]"#;
    let file = format!(r#"{{"dim": 2, "states": [{half}, {half}, {half}]}}"#);
    std::fs::write(dir.path().join("identical3.json"), file).unwrap();
    let out = qdist(dir.path(), &["metrics", "--input", "identical3.json", "--out", "r.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(json(&dir.path().join("r.json"))["deviation"].as_f64().unwrap().abs() <= 1e-7);
}

#[test]
fn malformed_states_exit_with_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let not_psd = r#"{"dim": 2, "states": [[[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]], [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]]}"#;
    std::fs::write(dir.path().join("bad.json"), not_psd).unwrap();
    let out = qdist(dir.path(), &["metrics", "--input", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_error(&out)["error"], "input");

    std::fs::write(dir.path().join("garbage.json"), "{").unwrap();
    let out = qdist(dir.path(), &["metrics", "--input", "garbage.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_error(&out)["error"], "json");

    let out = qdist(dir.path(), &["metrics", "--exemplar", "hexagon"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_rows_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdist(dir.path(), &["scan", "--n", "3", "--dim", "2", "--samples", "40", "--seed", "9", "--out", "scan.csv"]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sample_id,avg_set,avg_pairwise,deviation"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 40);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r[0], i as f64);
        assert!(r[2] >= 0.5 - 1e-8);
        assert!((r[3] - (r[2] - r[1])).abs() < 1e-15);
    }
    assert_eq!(json(&dir.path().join("scan.csv.manifest.json"))["seed"], 9);

    let out = qdist(dir.path(), &["scan", "--samples", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seesaw_writes_result_and_states() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdist(
        dir.path(),
        &["seesaw", "--n", "3", "--dim", "2", "--sign", "pos", "--restarts", "3", "--out", "ss.json", "--states-out", "best.json"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let result = json(&dir.path().join("ss.json"));
    let best = result["best_value"].as_f64().unwrap();
    assert!(best >= 0.0987, "{best}");

    // the stored set re-evaluates to the reported value
    let out = qdist(dir.path(), &["metrics", "--input", "best.json", "--out", "check.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let check = json(&dir.path().join("check.json"))["deviation"].as_f64().unwrap();
    assert!((check - best).abs() < 1e-7);

    let out = qdist(dir.path(), &["seesaw", "--n", "2", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn frontier_and_scaling_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdist(
        dir.path(),
        &["frontier", "--n", "3", "--dim", "2", "--kappas", "0,1", "--restarts", "2", "--out", "f.csv"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("f.csv")).unwrap();
    assert!(text.starts_with("kappa,avg_set,avg_pairwise,deviation,restarts_used\n"));
    assert_eq!(text.lines().count(), 5);

    let out = qdist(
        dir.path(),
        &["scaling", "--n-min", "3", "--n-max", "4", "--dim", "2", "--restarts", "3", "--out", "s.csv"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert!(text.starts_with("n,dim,deviation_lb,restarts_used\n"));
    assert_eq!(text.lines().count(), 3);

    let out = qdist(dir.path(), &["plot", "--in", "s.csv", "--out", "s.svg", "--kind", "bars"]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("s.svg")).unwrap();
    assert_eq!(svg.matches(r#"class="bar""#).count(), 2);
}

#[test]
fn verify_summary_and_trivial_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdist(dir.path(), &["verify", "--samples", "200", "--out", "v.json"]);
    assert!(out.status.success());
    let summary = json(&dir.path().join("v.json"));
    assert_eq!(summary["passed"], true);
    assert!(summary["max_equality_residual"].as_f64().unwrap() <= 1e-11);

    let out = qdist(dir.path(), &["verify", "--samples", "1", "--l-min", "1", "--l-max", "1", "--out", "one.json"]);
    assert!(out.status.success());
    assert_eq!(json(&dir.path().join("one.json"))["max_equality_residual"].as_f64(), Some(0.0));
}

#[test]
fn plot_scatter_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert!(qdist(dir.path(), &["scan", "--samples", "10", "--out", "scan.csv"]).status.success());
    let out = qdist(dir.path(), &["plot", "--in", "scan.csv", "--out", "scan.svg"]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("scan.svg")).unwrap();
    assert_eq!(svg.matches("<line").count(), 1);
    assert_eq!(svg.matches("<circle").count(), 10);

    std::fs::write(dir.path().join("empty.csv"), "sample_id,avg_set,avg_pairwise,deviation\n").unwrap();
    let out = qdist(dir.path(), &["plot", "--in", "empty.csv", "--out", "e.svg"]);
    assert_eq!(out.status.code(), Some(2));

    std::fs::write(dir.path().join("bad.csv"), "avg_set,avg_pairwise\n0.7,abc\n").unwrap();
    let out = qdist(dir.path(), &["plot", "--in", "bad.csv", "--out", "b.svg"]);
    assert_eq!(out.status.code(), Some(2));

    std::fs::write(dir.path().join("cols.csv"), "x,y\n0.7,0.8\n").unwrap();
    let out = qdist(dir.path(), &["plot", "--in", "cols.csv", "--out", "c.svg"]);
    assert_eq!(out.status.code(), Some(2));
}
