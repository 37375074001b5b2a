//! The `kinefault` binary: subcommands, exit codes and error messages.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn kinefault(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kinefault"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn presets_list_names_all_three() {
    let o = kinefault(&["presets", "list"]);
    assert!(o.status.success());
    let names: Vec<String> = stdout(&o)
        .lines()
        .filter_map(|l| l.split_whitespace().next().map(str::to_string))
        .collect();
    assert_eq!(names, ["example1", "example2", "healthy"]);
}

#[test]
fn shown_preset_validates() {
    let dir = tempfile::tempdir().unwrap();
    let o = kinefault(&["presets", "show", "example2"]);
    assert!(o.status.success());
    let cfg = write(dir.path(), "e2.cfg", &stdout(&o));
    let o = kinefault(&["validate", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("x_accel drift fault"));
}

#[test]
fn unknown_key_reports_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.cfg",
        "# scenario\nseed = 3\nnoise.sigma_gps = 1\n",
    );
    let o = kinefault(&["validate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bad.cfg:3:"), "{err}");
    assert!(err.contains("noise.sigma_gps"), "{err}");
}

#[test]
fn out_of_range_value_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.cfg", "delta = 3000\n");
    let o = kinefault(&["validate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`delta`"), "{}", stderr(&o));

    let cfg = write(
        dir.path(),
        "two.cfg",
        "faults = z_gyro:bias:1:40, x_accel:drift:0.05:40\n",
    );
    let o = kinefault(&["validate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`faults`"), "{}", stderr(&o));
}

#[test]
fn missing_file_is_an_io_error() {
    let o = kinefault(&["validate", "--config", "/nonexistent/scenario.cfg"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("/nonexistent/scenario.cfg"));
}

#[test]
fn run_needs_exactly_one_source() {
    assert_eq!(kinefault(&["run"]).status.code(), Some(2));
    let o = kinefault(&["run", "--preset", "healthy", "--config", "x.cfg"]);
    assert_eq!(o.status.code(), Some(2));
    let o = kinefault(&["run", "--preset", "example3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("example3"));
}

#[test]
fn run_writes_traces_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "short.cfg",
        "base = example1\ntrajectory.k_end = 1500\noutput_dir = ignored\n",
    );
    let out = dir.path().join("traces");
    let o = kinefault(&[
        "run",
        "--config",
        &cfg,
        "--seed",
        "5",
        "--output-dir",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("completed 1500 steps"));
    for f in kinefault::harness::TRACE_FILES {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("seed = 5\n"));
    assert!(summary.contains("outcome = completed\n"));
    assert!(!dir.path().join("ignored").exists());
}

#[test]
fn divergence_exits_nonzero_and_records_the_step() {
    let dir = tempfile::tempdir().unwrap();
    // the reference double-derivative settings blow up on the real signals
    let cfg = write(
        dir.path(),
        "diverge.cfg",
        "base = healthy\ndouble.r_d = 1e-7\ndouble.spacing = linear\n",
    );
    let out = dir.path().join("traces");
    let o = kinefault(&[
        "run",
        "--config",
        &cfg,
        "--output-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("aborted at step"));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("outcome = aborted\n"));
    let step: usize = summary
        .lines()
        .find_map(|l| l.strip_prefix("abort_step = "))
        .unwrap()
        .parse()
        .unwrap();
    let rows = fs::read_to_string(out.join("sensors.csv"))
        .unwrap()
        .lines()
        .count()
        - 1;
    assert_eq!(rows, step - 1);
}
