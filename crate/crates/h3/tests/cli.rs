use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn h3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_h3"))
        .args(args)
        .env_remove("H3_SEED")
        .output()
        .unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures/patterns")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_loose_path() {
    let o = h3(&["classify", "--pattern", &fixture("loose_path.h3")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["linear"], true);
    assert_eq!(v["d_H"], 1);
    assert_eq!(v["D_H"], 2);
    assert_eq!(v["connectors"], serde_json::json!([]));
    assert_eq!(v["aut"], 8);
}

#[test]
fn classify_non_linear_has_null_connectors() {
    let o = h3(&["classify", "--pattern", &fixture("k4.h3")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["linear"], false);
    assert!(v["connectors"].is_null());
}

#[test]
fn gen_writes_sidecar_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.h3");
    let o = h3(&["gen", "--kind", "random", "--n", "12", "--p", "0.4", "--seed", "7", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let g = h3::format::parse_h3(&text, "g.h3").unwrap();
    assert_eq!(h3::format::write_h3(&g), text);
    assert_eq!(g, h3_core::generators::gen_random(12, 0.4, 7).unwrap());
    let side: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("g.json")).unwrap()).unwrap();
    assert_eq!(side["kind"], "random");
    assert_eq!(side["seed"], 7);
    assert_eq!(side["m"], g.m());
}

#[test]
fn seed_from_environment_wins() {
    let run = |env: Option<&str>, seed: &str| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_h3"));
        c.args(["gen", "--n", "10", "--p", "0.5", "--seed", seed]).env_remove("H3_SEED");
        if let Some(v) = env {
            c.env("H3_SEED", v);
        }
        c.output().unwrap()
    };
    let env = run(Some("3"), "99");
    assert_eq!(env.stdout, run(None, "3").stdout);
    assert_ne!(env.stdout, run(None, "99").stdout);
    assert_eq!(run(Some("x"), "1").status.code(), Some(2));
}

#[test]
fn count_prints_one_line() {
    let dir = TempDir::new().unwrap();
    let host = dir.path().join("k6.h3");
    assert_eq!(h3(&["gen", "--kind", "complete", "--n", "6", "--out", s(&host)]).status.code(), Some(0));
    let o = h3(&["count", "--host", s(&host), "--pattern", &fixture("loose_path.h3"), "--q", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    assert_eq!(line.lines().count(), 1);
    assert!(line.starts_with("count=720 expected=7776 relative_error="), "{line}");
}

#[test]
fn violated_check_exits_one() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("empty.h3");
    std::fs::write(&g, "20 0\n").unwrap();
    let o = h3(&["check", "tuple", "--in", s(&g), "--q", "0.3", "--delta", "0.1"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "VIOLATED");
}

#[test]
fn usage_and_config_errors_exit_two() {
    assert_eq!(h3(&["check"]).status.code(), Some(2));
    assert_eq!(h3(&["frobnicate"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.h3");
    std::fs::write(&bad, "5 1\n2 1 0\n").unwrap();
    let o = h3(&["check", "tuple", "--in", s(&bad), "--q", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("a < b < c"));
}

#[test]
fn experiment_gate_is_config_invalid() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    let body = serde_json::json!({
        "n": [10], "p": [0.5], "seeds": [0],
        "patterns": [{"id": "k4", "path": fixture("k4.h3")}],
    });
    std::fs::write(&cfg, body.to_string()).unwrap();
    let o = h3(&["experiment", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("CONFIG_INVALID") && err.contains("linear 3-uniform connector-free"), "{err}");
}

#[test]
fn experiment_bytes_do_not_depend_on_threads() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    let body = serde_json::json!({
        "n": [24], "p": [0.4], "q": [0.2, 0.4], "alpha": 0.5, "seeds": [1, 2, 3],
        "generator": "subsample",
        "patterns": [{"id": "lp", "path": fixture("loose_path.h3")}],
        "properties": [
            {"property": "QPRIME", "eta": 0.5, "delta": 0.3},
            {"property": "DISC", "eps": 0.2},
            {"property": "PAIR", "delta": 0.5},
            {"property": "TUPLE", "delta": 0.5},
            {"property": "BDD", "k": 3, "C": 3.0},
        ],
        "jumbledness": true,
    });
    std::fs::write(&cfg, body.to_string()).unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3", "8"] {
        for format in ["csv", "json"] {
            let o = h3(&["--threads", threads, "experiment", "--config", s(&cfg), "--format", format]);
            assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
            outputs.push((format, o.stdout));
        }
    }
    for w in outputs.windows(2).skip(1) {
        let base = outputs.iter().find(|(f, _)| *f == w[1].0).unwrap();
        assert_eq!(base.1, w[1].1);
    }
    let csv = String::from_utf8(outputs[0].1.clone()).unwrap();
    // 2 q values x 3 seeds x (count + 5 checks)
    assert_eq!(csv.lines().count(), 1 + 2 * 3 * 6);
    assert!(csv.lines().skip(1).all(|l| !l.contains(",ERROR,")), "{csv}");
}

#[test]
fn implication_runs_from_config() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("imp.json");
    std::fs::write(&cfg, r#"{"n": 24, "q": [0.3], "seeds": [0, 1]}"#).unwrap();
    let out = dir.path().join("imp_out.json");
    let o = h3(&["--threads", "2", "implication", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["instances"].as_array().unwrap().len(), 2);
    assert_eq!(v["edges"].as_array().unwrap().len(), 3);
}
