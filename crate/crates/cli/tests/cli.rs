//! End-to-end runs of the binary: contract examples, exit codes, determinism
//! and record plumbing.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_percolog"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn formula_cardy_symmetry_point() {
    let dir = tempdir("formula");
    let out = run(&["formula", "--op", "cardy", "--lambda", "0.5"], &dir);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "op,argument,value,abs_error_bound");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let value: f64 = row[2].parse().unwrap();
    assert!((value - 0.5).abs() < 1e-10, "cardy(1/2) = {value}");
}

#[test]
fn windows_runs_are_byte_identical() {
    let dir = tempdir("windows");
    let args = [
        "windows", "--n", "24", "--eps", "1.0", "--trials", "400", "--seed", "7",
        "--truncation", "32",
    ];
    let a = run(&args, &dir);
    let b = run(&args, &dir);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("n,eps,window,lo,hi,observable,mean,stderr,trials"));
}

#[test]
fn exit_codes() {
    let dir = tempdir("exits");
    // unknown flag -> usage error
    let out = run(&["simulate", "--definitely-not-a-flag"], &dir);
    assert_eq!(out.status.code(), Some(2));
    // numeric range error
    let out = run(&["formula", "--op", "cardy", "--lambda", "1.5"], &dir);
    assert_eq!(out.status.code(), Some(3));
    // missing grid
    let out = run(&["formula", "--op", "cardy"], &dir);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn records_accumulate_and_merge() {
    let dir = tempdir("records");
    let args = [
        "simulate", "--n", "4", "--trials", "600", "--truncation", "16", "--records",
        "runs.jsonl",
    ];
    let a = run(&[&args[..], &["--seed", "1"]].concat(), &dir);
    let b = run(&[&args[..], &["--seed", "2"]].concat(), &dir);
    assert!(a.status.success() && b.status.success());
    let out = run(&["report", "--input", "runs.jsonl"], &dir);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "command,fingerprint,observable,trials,mean,stderr");
    // the two seeds share a fingerprint, so the report merges them
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[3], "1200", "merged trials: {text}");
    assert!(lines.next().is_none());
}

#[test]
fn config_file_fills_defaults_and_flags_win() {
    let dir = tempdir("config");
    std::fs::write(dir.join("percolog.conf"), "trials = 400\nseed = 7\ntruncation = 32\n")
        .unwrap();
    let flags = run(
        &["windows", "--n", "24", "--eps", "1.0", "--trials", "400", "--seed", "7",
          "--truncation", "32", "--records", "a.jsonl"],
        &dir,
    );
    let config = run(
        &["--config", "percolog.conf", "windows", "--n", "24", "--eps", "1.0",
          "--records", "b.jsonl"],
        &dir,
    );
    assert_eq!(flags.stdout, config.stdout);
    let override_seed = run(
        &["--config", "percolog.conf", "windows", "--n", "24", "--eps", "1.0",
          "--seed", "9", "--records", "c.jsonl"],
        &dir,
    );
    assert_ne!(flags.stdout, override_seed.stdout);
}

#[test]
fn verify_enumeration_passes() {
    let dir = tempdir("verify");
    let out = run(&["verify", "--suite", "enumeration"], &dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).lines().all(|l| l.starts_with("ok - ")));
}

fn tempdir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("percolog-cli-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
