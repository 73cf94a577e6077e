//! Runs the binary end to end on temporary directories.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const WORKED: &str = r#"{ "state": "plus", "a": "sigmaz", "b": "sigmax", "trust": "trusted", "n": 20000, "seed": 3 }"#;

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_collapse-rng"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &TempDir, text: &str) -> String {
    let path = dir.path().join("run.json");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn simulate_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, WORKED);
    let (x, y) = (dir.path().join("x"), dir.path().join("y"));
    assert_eq!(run(&x, &["simulate", "--config", &cfg]).status.code(), Some(0));
    assert_eq!(run(&y, &["simulate", "--config", &cfg]).status.code(), Some(0));
    let stats = read(&x, "stats.csv");
    assert_eq!(stats, read(&y, "stats.csv"));
    assert!(stats.starts_with("path,outcome,count,freq\n"));
    assert!(stats.lines().any(|l| l.starts_with("d_hat,")));

    let z = dir.path().join("z");
    run(&z, &["simulate", "--config", &cfg, "--seed", "4"]);
    assert_ne!(stats, read(&z, "stats.csv"));
}

#[test]
fn certify_worked_example() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, WORKED);
    let out = run(dir.path(), &["certify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cert = read(dir.path(), "cert.csv");
    let mut lines = cert.lines();
    assert_eq!(lines.next(), Some("theorem,disturbance,tau,adjusted,bits"));
    let row = |name: &str| cert.lines().find(|l| l.starts_with(&format!("{name},"))).unwrap().to_string();
    assert_eq!(row("T1"), "T1,0.5,,false,0.228447");
    assert!(row("T3").ends_with(",0.5,false,1.0"));
    assert!(row("best").ends_with(",1.0"));
}

#[test]
fn impossible_disturbance_exits_3() {
    let dir = TempDir::new().unwrap();
    // flipping |0⟩ to |1⟩ gives a disturbance of 1, beyond every single-shot bound
    let cfg = write_config(
        &dir,
        r#"{ "state": "zero", "a": "sigmaz", "b": "sigmaz",
             "realization": { "unitaries": [[[0, 1], [1, 0]], [[0, 1], [1, 0]]] },
             "trust": "untrusted", "n": 1000 }"#,
    );
    let out = run(dir.path(), &["certify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = write_config(&dir, "{\n  \"state\": \"plus\",\n  \"a\": ,\n}");
    let out = run(dir.path(), &["certify", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let unknown = write_config(&dir, r#"{ "state": "plus", "a": "sigmaz", "b": "sigmax", "colour": 1 }"#);
    assert_eq!(run(dir.path(), &["simulate", "--config", &unknown]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["verify", "--instances", "0"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["figure2", "--steps", "0"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["bogus"]).status.code(), Some(2));
}

#[test]
fn verify_writes_report() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["verify", "--instances", "200", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = read(dir.path(), "verify.csv");
    assert!(csv.starts_with("check,link,checked,violations,min_slack,tightest_ratio\n"));
    assert!(csv.contains(",\"delta_A >= D(rho,rho')\","));
    for line in csv.lines().skip(1) {
        assert_eq!(line.rsplit(',').nth(2), Some("0"), "{line}");
    }
}

#[test]
fn figure_outputs() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(dir.path(), &["figure2", "--steps", "1"]).status.code(), Some(0));
    let fig2 = read(dir.path(), "fig2.csv");
    assert_eq!(fig2.lines().next(), Some("d,thm1_bits,thm2_bits,thm3_bits"));
    assert_eq!(fig2.lines().count(), 3);

    assert_eq!(run(dir.path(), &["figure3", "--steps", "10", "--budget", "50"]).status.code(), Some(0));
    let fig3 = read(dir.path(), "fig3.csv");
    assert_eq!(fig3.lines().next(), Some("q0,baseline_bits,kl_min_bits,kl_max_bits"));
    assert_eq!(fig3.lines().count(), 12);
}
