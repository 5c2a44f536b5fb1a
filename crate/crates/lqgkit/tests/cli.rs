//! Black-box tests of the binary: argv contract, exit codes, output files,
//! and stream separation.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lqgkit"))
}

#[test]
fn usage_errors_exit_2() {
    // unknown flag
    let out = bin().args(["simulate", "--bogus", "x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty(), "usage text goes to stderr");
    assert!(out.stdout.is_empty());

    // missing required option
    let out = bin().args(["simulate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // unknown subcommand
    let out = bin().args(["launch"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // bad --select value
    let out = bin()
        .args(["tune", "--scenario", "planar-goal", "--select", "pid", "--out", "/tmp/x"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // no arguments at all
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_1() {
    let out = bin()
        .args(["roots", "--scenario", "/nonexistent/no.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let out = bin()
        .args(["analyze", "--trace", "/nonexistent/dir"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    let out = bin().args(["--help"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for cmd in ["simulate", "tune", "analyze", "roots"] {
        assert!(text.contains(cmd), "help must list `{cmd}`");
    }
}

#[test]
fn roots_prints_spectrum_and_verdict() {
    let out = bin()
        .args(["roots", "--scenario", "longitudinal-demo"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("characteristic polynomial"));
    assert!(text.contains("verdict: stable"));
    assert!(text.contains("-7.5215"));
    assert!(text.contains("4.6366")); // 4.636695i printed at 6 decimals
}

#[test]
fn simulate_writes_files_and_is_seed_sensitive() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for (out, seed) in [(&out_a, "3"), (&out_b, "4")] {
        let status = bin()
            .args([
                "simulate",
                "--scenario",
                "planar-goal",
                "--seed",
                seed,
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
        for f in ["trace.csv", "metrics.json", "plot.csv"] {
            assert!(out.join(f).exists(), "{f} missing");
        }
    }
    // different seeds, different trajectories
    let a = std::fs::read(out_a.join("trace.csv")).unwrap();
    let b = std::fs::read(out_b.join("trace.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn simulate_accepts_scenario_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("custom.json");
    std::fs::write(
        &path,
        r#"{"model": "planar-goal", "duration": 30.0, "seeds": [1]}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let status = bin()
        .args([
            "simulate",
            "--scenario",
            path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out.join("trace.csv")).unwrap();
    assert_eq!(csv.lines().count(), 61); // header + 30/0.5 rows
}

#[test]
fn analyze_round_trips_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    assert!(bin()
        .args([
            "simulate",
            "--scenario",
            "planar-goal",
            "--seed",
            "9",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap()
        .success());
    let sim_out = bin()
        .args(["analyze", "--trace", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(sim_out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&sim_out.stdout);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split_whitespace().collect();
    assert_eq!(
        header,
        vec!["Specificity", "Sensitivity", "Accuracy", "SNR(dB)", "PSNR(dB)", "MSE"]
    );
    assert_eq!(lines.next().unwrap().split_whitespace().count(), 6);
}

#[test]
fn tune_writes_history_and_tuned_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.json");
    // short horizon keeps this test quick
    std::fs::write(
        &path,
        r#"{"model": "planar-goal", "duration": 30.0, "seeds": [1]}"#,
    )
    .unwrap();
    let out = dir.path().join("tuned");
    let status = bin()
        .args([
            "tune",
            "--scenario",
            path.to_str().unwrap(),
            "--select",
            "kf",
            "--iters",
            "3",
            "--pop",
            "3",
            "--seed",
            "1",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let history = std::fs::read_to_string(out.join("history.csv")).unwrap();
    assert!(history.starts_with("iteration,best_cost,best_position_0"));
    assert_eq!(history.lines().count(), 4); // header + 3 iterations
    // tuned scenario reloads cleanly
    let tuned = std::fs::read_to_string(out.join("tuned_scenario.json")).unwrap();
    assert!(lqgkit::sim::load_scenario(&tuned).is_ok());
}
