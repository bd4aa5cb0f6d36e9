use std::process::Command;

use gplab_bench::output::{read_rows, COLUMNS};

fn gplab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gplab"))
}

fn write_config(dir: &tempfile::TempDir, text: &str) -> std::path::PathBuf {
    let path = dir.path().join("exp.toml");
    std::fs::write(&path, text).unwrap();
    path
}

const ORDER: &str = "problem = \"order\"\nn = [8, 16, 32]\nengine = \"rls-gp-strict\"\ntrials = 4\nseed = 2\n";

#[test]
fn run_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, ORDER);
    let out = dir.path().join("out.csv");
    let res = gplab()
        .args(["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--parallelism", "2"])
        .output()
        .unwrap();
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), COLUMNS.join(","));
    let rows = read_rows(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r.success && r.schema_version == 1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("log-log slope"));

    let res = gplab()
        .args(["analyze", out.to_str().unwrap(), "--bound", "nlogn"])
        .output()
        .unwrap();
    assert!(res.status.success());
    assert!(String::from_utf8_lossy(&res.stdout).contains("bound nlogn"));
}

#[test]
fn sorted_output_is_seed_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, ORDER);
    let run = |threads: &str, seed: &str| {
        let res = gplab()
            .args(["run", cfg.to_str().unwrap(), "--sorted", "--parallelism", threads, "--seed", seed])
            .output()
            .unwrap();
        assert!(res.status.success());
        res.stdout
    };
    assert_eq!(run("1", "7"), run("3", "7"));
    assert_ne!(run("1", "7"), run("1", "8"));
}

#[test]
fn validate_reports_errors_with_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_config(&dir, ORDER);
    assert!(gplab().args(["validate", good.to_str().unwrap()]).status().unwrap().success());
    let bad = write_config(&dir, &ORDER.replace("rls-gp-strict", "no-such-engine"));
    let res = gplab().args(["validate", bad.to_str().unwrap()]).output().unwrap();
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("no-such-engine"));
    let missing = gplab().args(["validate", "/nonexistent/x.toml"]).output().unwrap();
    assert!(!missing.status.success());
}

#[test]
fn demo_prints_a_trial() {
    let res = gplab().args(["demo", "order", "--n", "6"]).output().unwrap();
    assert!(res.status.success());
    let out = String::from_utf8_lossy(&res.stdout);
    assert!(out.contains("success true") && out.contains("final tree"), "{out}");
    assert!(!gplab().args(["demo", "nonsense"]).status().unwrap().success());
}

#[test]
fn analyze_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    std::fs::write(&path, "a,b\n1,2\n").unwrap();
    assert!(!gplab().args(["analyze", path.to_str().unwrap(), "--bound", "n"]).status().unwrap().success());
    assert!(!gplab().args(["analyze", path.to_str().unwrap(), "--bound", "n +"]).status().unwrap().success());
}
