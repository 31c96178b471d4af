use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn riccati(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_riccati"));
    cmd.args(args).env_remove("RICCATI_THRESHOLD_OVERRIDE");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn summary(dir: &Path, scenario: &str) -> HashMap<String, String> {
    fs::read_to_string(dir.join(format!("summary_{scenario}.txt")))
        .expect("summary written")
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn number(map: &HashMap<String, String>, key: &str) -> f64 {
    map[key].parse().expect("numeric value")
}

#[test]
fn zero_horizon_returns_initial_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = riccati(&["nls", "--T", "0", "--output", dir.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(dir.path(), "nls");
    assert!(number(&s, "sup_error") <= 1e-12);
    assert_eq!(number(&s, "T"), 0.0);
    for name in ["solution_nls.csv", "trace_nls.csv", "plot_nls.gp"] {
        assert!(dir.path().join(name).is_file(), "{name} missing");
    }
}

#[test]
fn bad_arguments_exit_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad_config = dir.path().join("bad.cfg");
    fs::write(&bad_config, "colour=blue\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["kdv", "--bogus"],
        vec!["heat"],
        vec!["nls", "--M", "100"],
        vec!["conv", "--dt", "-1"],
        vec!["fkpp", "--L", "abc"],
        vec!["nls", "--nonlinear-step", "rk4"],
        vec!["rd", "--sigma", "0"],
        vec!["kdv", "--config", bad_config.to_str().unwrap()],
    ];
    for args in cases {
        let out = riccati(&args, &[]);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = riccati(&["fkpp", "--T", "0"], &[("RICCATI_THREADS", "many")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# reduced run\nM=32\nT=0.01\ndt=1e-3\ntrace_samples=5\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = riccati(
        &["conv", "--config", cfg.to_str().unwrap(), "--T", "0.02", "--output", out_dir.to_str().unwrap()],
        &[("RICCATI_THREADS", "1")],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(&out_dir, "conv");
    assert_eq!(number(&s, "M"), 32.0);
    assert_eq!(number(&s, "T"), 0.02);
    assert_eq!(number(&s, "dt"), 1e-3);
    let trace = fs::read_to_string(out_dir.join("trace_conv.csv")).unwrap();
    assert_eq!(trace.lines().count(), 1 + 5);
}

#[test]
fn io_failure_exits_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let target = blocker.join("out");
    let out = riccati(&["fkpp", "--M", "32", "--output", target.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn blow_up_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = riccati(
        &["kdv", "--M", "32", "--T", "20", "--dt", "0.2", "--output", dir.path().to_str().unwrap()],
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kdv"));
}

#[test]
fn reduced_resolution_degrades_smoothly() {
    let dir = tempfile::tempdir().unwrap();
    let out = riccati(&["rd", "--M", "64", "--output", dir.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(dir.path(), "rd");
    assert!(number(&s, "sup_error") <= 1e-2);
    for name in ["solution_rd.csv", "solution_rd_v.csv"] {
        assert!(dir.path().join(name).is_file(), "{name} missing");
    }
}

#[test]
fn zero_threshold_fails_run_all() {
    let dir = tempfile::tempdir().unwrap();
    let out = riccati(
        &["run_all", "--output", dir.path().to_str().unwrap()],
        &[("RICCATI_THRESHOLD_OVERRIDE", "0"), ("RICCATI_THREADS", "1")],
    );
    assert_eq!(out.status.code(), Some(1));
    let table = String::from_utf8_lossy(&out.stdout);
    for name in ["rd", "kdv", "nls", "nls4", "conv", "fkpp"] {
        let row = table
            .lines()
            .find(|l| l.split_whitespace().next() == Some(name))
            .unwrap_or_else(|| panic!("no row for {name}"));
        assert!(row.ends_with("FAIL"), "{row}");
    }
    assert!(table.contains("overall: FAIL"));
}
