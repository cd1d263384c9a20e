use std::io::Write;
use std::process::{Command, Output};

fn atomiclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atomiclab"))
        .args(args)
        .env_remove("ATOMICLAB_SEED")
        .output()
        .expect("binary runs")
}

fn spec_file(name: &str, text: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("atomiclab-{}-{name}.spec", std::process::id()));
    std::fs::File::create(&path).unwrap().write_all(text.as_bytes()).unwrap();
    path
}

#[test]
fn passing_suite_exits_zero() {
    let out = atomiclab(&["suite", "lemma53"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["suite"], "lemma53");
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 4);
    assert!(checks.iter().all(|c| c["status"] == "pass" && c.get("certificate").is_some()));
}

#[test]
fn failing_check_exits_one() {
    let path = spec_file("fail", "family = explicit\ngenerators = 1/2, 1/4\n");
    let out = atomiclab(&["suite", "lemma53", "--spec", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<_> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["id"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(failed, vec!["spec.f0.atom.g01"]);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(atomiclab(&["suite", "nope"]).status.code(), Some(2));
    assert_eq!(atomiclab(&["suite", "grams", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(atomiclab(&["suite", "grams", "--depth", "x"]).status.code(), Some(2));
    assert_eq!(atomiclab(&["suite", "thm54", "--field", "4"]).status.code(), Some(2));
    assert_eq!(atomiclab(&[]).status.code(), Some(2));

    let path = spec_file("bad", "family = explicit\ngenerators = 1/2, -1/3\n");
    let out = atomiclab(&["suite", "grams", "--spec", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = Command::new(env!("CARGO_BIN_EXE_atomiclab"))
        .args(["suite", "lemma53"])
        .env("ATOMICLAB_SEED", "seven")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let a = atomiclab(&["suite", "all"]);
    let b = atomiclab(&["suite", "all"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let ids: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.windows(2).all(|w| w[0] < w[1]), "ids sorted and unique");
}

#[test]
fn seed_override_is_echoed() {
    let out = Command::new(env!("CARGO_BIN_EXE_atomiclab"))
        .args(["suite", "thm54"])
        .env("ATOMICLAB_SEED", "12345")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["config"]["seed"], 12345);
}

#[test]
fn thm54_reports_three_steps() {
    let out = atomiclab(&["suite", "thm54", "--denom-bound", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let descent = report["checks"].as_array().unwrap().iter().find(|c| c["id"] == "thm54.descent").unwrap();
    assert_eq!(descent["certificate"]["steps"], 3);
    assert_eq!(descent["certificate"]["chain"].as_array().unwrap().len(), 4);
}

#[test]
fn text_format_has_one_line_per_check() {
    let out = atomiclab(&["suite", "lemma53", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.starts_with("PASS")));
}
