use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use werner_ou::sweep::CSV_HEADER;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_werner-ou"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn parse_csv(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    lines.map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn preset_sweep_writes_csv_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig3.csv");
    let res = run(&["sweep", "--preset", "fig3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));

    let rows = parse_csv(&out);
    assert_eq!(rows.len(), 400);
    for row in &rows {
        assert_eq!(row.len(), 11);
        assert_eq!((row[0].as_str(), row[1].as_str()), ("CQN", "PaperLiteral"));
        let num = |k: usize| row[k].parse::<f64>().unwrap();
        assert!((num(8) - (num(6) - num(7))).abs() <= 1e-10, "U != L - R in {row:?}");
    }
    let first = &rows[0];
    assert_eq!(first[5], "0.00000000000");
    assert_eq!(first[9], "1.00000000000");

    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fig3.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["preset"], "fig3");
    assert_eq!(meta["config"]["g_values"][0], 0.4);
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn flags_build_a_custom_grid_sorted_by_g_p_tau() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("grid.csv");
    let res = run(&[
        "sweep",
        "--config",
        "iqn,cqn",
        "--mode",
        "gaussian-exact",
        "--g",
        "1,0.1",
        "--p",
        "0.9,0.2",
        "--lambda",
        "0.5",
        "--tau-max",
        "3",
        "--tau-points",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let rows = parse_csv(&out);
    assert_eq!(rows.len(), 2 * 2 * 2 * 4);
    let keys: Vec<(f64, f64, f64)> = rows
        .iter()
        .map(|r| (r[2].parse().unwrap(), r[3].parse().unwrap(), r[5].parse().unwrap()))
        .collect();
    assert!(keys.windows(2).all(|w| w[0] <= w[1]), "rows not sorted");
    assert!(rows.iter().all(|r| r[1] == "GaussianExact" && r[4] == "0.500000000000"));
    assert_eq!((rows[0][0].as_str(), rows[1][0].as_str()), ("CQN", "IQN"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"preset": "fig5", "tau_points": 3, "p_values": [0.5]}"#).unwrap();
    let out = dir.path().join("file.csv");
    let res = run(&[
        "sweep",
        "--config-file",
        cfg.to_str().unwrap(),
        "--tau-points",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let rows = parse_csv(&out);
    assert_eq!(rows.len(), 5);
    assert!(rows
        .iter()
        .all(|r| r[2] == "0.100000000000" && r[3] == "0.500000000000"));
}

#[test]
fn sweep_without_out_prints_to_stdout() {
    let res = run(&["sweep", "--tau-points", "2"]);
    assert_eq!(code(&res), 0);
    let text = String::from_utf8(res.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with(CSV_HEADER));
}

#[test]
fn monte_carlo_sweep_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|k| dir.path().join(format!("mc{k}.csv"))).collect();
    for path in &paths {
        let res = run(&[
            "sweep",
            "--config",
            "iqn",
            "--tau-max",
            "2",
            "--tau-points",
            "5",
            "--n-traj",
            "300",
            "--dt",
            "0.05",
            "--seed",
            "42",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&res), 0, "{}", stderr(&res));
    }
    assert_eq!(fs::read(&paths[0]).unwrap(), fs::read(&paths[1]).unwrap());
    let meta = fs::read_to_string(dir.path().join("mc0.csv.meta.json")).unwrap();
    assert!(meta.contains("\"seed\": 42"));
}

#[test]
fn ew_subcommand_traces_noiseless_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ew.csv");
    let res = run(&[
        "ew",
        "--p",
        "1",
        "--lambda",
        "1",
        "--tau-max",
        "3",
        "--tau-points",
        "31",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let rows = parse_csv(&out);
    assert_eq!(rows.len(), 31);
    for row in rows {
        assert_eq!(row[1], "Noiseless");
        let (tau, ew): (f64, f64) = (row[5].parse().unwrap(), row[10].parse().unwrap());
        assert!((ew - 0.5 * (4.0 * tau).cos()).abs() <= 1e-10);
    }
}

#[test]
fn validate_mc_reports_and_exits_zero() {
    let res = run(&[
        "validate-mc",
        "--config",
        "cqn",
        "--g",
        "0.4",
        "--lambda",
        "0.5",
        "--n-traj",
        "20000",
        "--tau",
        "1,2",
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let text = String::from_utf8(res.stdout).unwrap();
    assert!(text.contains("PASS"));
    assert_eq!(text.lines().filter(|l| l.starts_with("CQN,")).count(), 2);
}

#[test]
fn validate_mc_smoke_run_at_minimum_samples() {
    let res = run(&["validate-mc", "--n-traj", "100", "--tau", "1"]);
    assert!(matches!(code(&res), 0 | 3), "{}", stderr(&res));
    assert!(String::from_utf8(res.stdout).unwrap().contains("max |z|"));
}

#[test]
fn validate_mc_exits_three_on_biased_estimates() {
    // a single trapezoid step over τ = 1 underestimates Var ∫χ by about 7%
    let res = run(&[
        "validate-mc",
        "--config",
        "cqn",
        "--g",
        "1",
        "--lambda",
        "0.5",
        "--dt",
        "1",
        "--tau",
        "1",
    ]);
    assert_eq!(code(&res), 3, "{}", String::from_utf8_lossy(&res.stdout));
    assert!(String::from_utf8(res.stdout).unwrap().contains("FAIL"));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["sweep", "--bogus"][..],
        &["sweep", "--g", "-1"],
        &["sweep", "--p", "1.5"],
        &["sweep", "--tau-points", "1"],
        &["sweep", "--preset", "fig9"],
        &["sweep", "--config", "xqn"],
        &["sweep", "--preset", "fig3", "--config-file", "x.json"],
        &["sweep", "--config-file", "/nonexistent/cfg.json"],
        &["validate-mc", "--n-traj", "99"],
        &["frobnicate"],
        &[],
    ] {
        let res = run(args);
        assert_eq!(code(&res), 1, "{args:?}: {}", stderr(&res));
        assert!(!stderr(&res).is_empty());
    }
    let res = run(&["sweep", "--p", "1.5"]);
    assert!(stderr(&res).contains("p_values"));
}

#[test]
fn unwritable_output_path_is_reported() {
    let res = run(&["sweep", "--tau-points", "2", "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(code(&res), 1);
    assert!(stderr(&res).contains("/nonexistent/dir/out.csv"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["sweep", "--help"])), 0);
}
