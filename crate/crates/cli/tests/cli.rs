use std::path::Path;
use std::process::{Command, Output};

fn seqprob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqprob")).args(args).env_remove("SEQPROB_THREADS").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn default_invocation_lists_catalog() {
    let o = seqprob(&[]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().count() >= 9);
    for name in ["appendix-d", "delta-sweep", "apparatus-check", "frequency-operator"] {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn json_catalog() {
    let o = seqprob(&["--list", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let entries = v.as_array().unwrap();
    assert!(entries.len() >= 9);
    for e in entries {
        assert!(!e["topic"].as_str().unwrap().is_empty());
        assert!(!e["description"].as_str().unwrap().is_empty());
    }
}

#[test]
fn unknown_scenario_is_usage_error() {
    let o = seqprob(&["--scenario", "no-such-thing"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().to_lowercase().contains("usage"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"scenario": "two-slit", "colour": "red"}"#,
        r#"{"scenario": "two-slit", "physics": {"delta": -1}}"#,
        r#"{"scenario": "delta-sweep", "physics": {"times": [1, 0]}}"#,
        r#"{"scenario": "two-slit", "grid": {"n_points": 4, "x_min": 0, "x_max": 1}}"#,
        "not json",
    ];
    for (i, c) in cases.iter().enumerate() {
        let path = dir.path().join(format!("c{i}.json"));
        std::fs::write(&path, c).unwrap();
        let out = dir.path().join(format!("o{i}"));
        let o = seqprob(&["--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 2, "{c}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn check_mode_sets_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ok");
    let o = seqprob(&["--scenario", "frequency-operator", "--check", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    // The appendix-d bound at r = 0.01 is not met by the quadrature.
    let out = dir.path().join("fail");
    let o = seqprob(&["--scenario", "appendix-d", "--check", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let o = seqprob(&["--scenario", "appendix-d", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&read(&out.join("report.json"))).unwrap();
    for a in report["assertions"].as_array().unwrap() {
        assert!(a["value"].is_number() && a["tolerance"].is_number() && a["pass"].is_boolean());
    }
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"scenario": "hv-locality", "ensemble": {"n_samples": 20000}}"#).unwrap();
    let mut manifests = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(format!("t{threads}"));
        let o = seqprob(&["--config", cfg.to_str().unwrap(), "--threads", threads, "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        manifests.push(read(&out.join("manifest.json")));
    }
    let out = dir.path().join("env");
    let o = Command::new(env!("CARGO_BIN_EXE_seqprob"))
        .args(["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .env("SEQPROB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    manifests.push(read(&out.join("manifest.json")));
    assert_eq!(manifests[0], manifests[1]);
    assert_eq!(manifests[0], manifests[2]);
}

#[test]
fn reruns_from_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let o = seqprob(&["--scenario", "two-slit", "--seed", "11", "--out", first.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let second = dir.path().join("second");
    let m = first.join("manifest.json");
    let o = seqprob(&["--config", m.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read(&m), read(&second.join("manifest.json")));
    let manifest: serde_json::Value = serde_json::from_str(&read(&m)).unwrap();
    assert_eq!(manifest["seed"], 11);
    assert_eq!(manifest["config"]["physics"]["separation"], 6.0);
    let names: Vec<&str> = manifest["files"].as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"density.csv") && names.contains(&"report.json"));
}

#[test]
fn json_format_writes_json_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("j");
    let o = seqprob(&["--scenario", "frequency-operator", "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let t: serde_json::Value = serde_json::from_str(&read(&out.join("condmarg.json"))).unwrap();
    assert_eq!(t["columns"][0], "outcome");
    assert_eq!(t["rows"][0][1], 0.5);
}

#[test]
fn csv_uses_lf_and_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c");
    let o = seqprob(&["--scenario", "appendix-d", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = read(&out.join("ratio_curve.csv"));
    assert!(!text.contains('\r'));
    assert!(text.starts_with("r,p_pp,b,ratio,"));
    assert_eq!(text.lines().count(), 62);
}
