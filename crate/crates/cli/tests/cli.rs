use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oscillabound"))
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str], config: &Path) -> Output {
    bin().args(args).arg(config).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_config(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn shipped_configs_run() {
    for (cmd, cfg) in [
        ("muhat", "muhat_zero"),
        ("muhat", "muhat_profile"),
        ("certify", "certify_parabola"),
        ("padic-muhat", "padic_worked"),
        ("padic-certify", "padic_certify"),
        ("config-search", "config_search"),
        ("clique", "clique_parabola"),
        ("color-check", "color_cos"),
        ("reduce", "reduce"),
    ] {
        let out = run(&[cmd], &configs().join(format!("{cfg}.toml")));
        assert_eq!(out.status.code(), Some(0), "{cmd} {cfg}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["command"], cmd);
    }
}

#[test]
fn zero_frequency_is_one() {
    let out = run(&["muhat"], &configs().join("muhat_zero.toml"));
    let v = json(&out)["result"]["values"][0]["value"].as_f64().unwrap();
    assert!((v - 1.0).abs() <= 1e-12);
}

#[test]
fn worked_padic_value() {
    let out = run(&["padic-muhat"], &configs().join("padic_worked.toml"));
    assert_eq!(json(&out)["result"]["values"][0]["exact"], "1/4");
}

#[test]
fn dependent_family_is_rejected() {
    let out = run(&["certify"], &configs().join("certify_dependent.toml"));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("independence"));
}

#[test]
fn bad_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let typo = write_config(&dir, "typo.toml", "famly = [[0, 1]]\n");
    assert_eq!(run(&["muhat"], &typo).status.code(), Some(1));
    assert_eq!(run(&["muhat"], &dir.path().join("missing.toml")).status.code(), Some(1));
    let out = bin().arg("no-such-command").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let below = write_config(
        &dir,
        "below.toml",
        "family = [[0, 1], [0, 0, 1]]\nlambda = [1, 1]\n[window]\na = -1\nt = 2\n",
    );
    assert_eq!(run(&["muhat"], &below).status.code(), Some(1));
}

#[test]
fn runs_are_deterministic() {
    let cfg = configs().join("pipeline_parabola.toml");
    let a = run(&["pipeline", "--budget", "300"], &cfg);
    let b = run(&["pipeline", "--budget", "300"], &cfg);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["pipeline", "--budget", "300", "--seed", "99"], &cfg);
    assert_eq!(json(&c)["config"]["seed"], 99);
}

#[test]
fn csv_sidecar_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("profile.csv");
    let out = bin()
        .args(["muhat", "--csv"])
        .arg(&csv)
        .arg(configs().join("muhat_profile.toml"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda_1,lambda_2,value,error"));
    let rows = json(&out)["result"]["values"].as_array().unwrap().len();
    assert_eq!(lines.count(), rows);
}

#[test]
fn coloring_below_threshold_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "c.toml", "[coloring]\nconstant = 2.0\ncos = [1.0]\nn = 3\nedges = 10\n");
    let out = run(&["color-check"], &cfg);
    assert_eq!(out.status.code(), Some(1));
}
