//! Exit-code contract, config-file precedence, and output-shape checks for
//! the binary.

use std::process::{Command, Output};

fn superlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superlab"))
        .args(args)
        .output()
        .expect("spawn superlab")
}

fn superlab_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_superlab"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn superlab")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn exit_zero_on_passing_checks() {
    let out = superlab(&["check-identity", "--n", "8", "--a", "1.3", "--b", "-0.7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS"));

    // Both sides vanish: the absolute-tolerance path, no division by zero.
    let out = superlab(&["check-identity", "--n", "1", "--a", "0", "--b", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("abs_err"));

    let out = superlab(&["sum-rule", "--basis", "oscillator", "--n", "5", "--g", "0.5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS"));

    let out = superlab(&["sum-rule", "--basis", "rotor", "--c", "0.5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let out = superlab(&["sum-rule", "--basis", "canonical", "--n", "20", "--a", "4.0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn exit_one_on_failing_check() {
    // Demand an impossible tolerance; the check honestly fails.
    let out = superlab(&[
        "check-identity",
        "--n",
        "8",
        "--a",
        "1.3",
        "--b",
        "-0.7",
        "--tol",
        "1e-18",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn exit_two_on_usage_errors() {
    // Bad figure id.
    let out = superlab(&["fig", "--id", "7"]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown flag (clap).
    let out = superlab(&["fig", "--id", "1", "--bogus", "3"]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown subcommand.
    let out = superlab(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    // Malformed grid.
    let out = superlab(&["fig", "--id", "1", "--grid", "0:1"]);
    assert_eq!(out.status.code(), Some(2));
    // Out-of-range parameter reaches the core domain check.
    let out = superlab(&["spectral-energy", "--n", "5", "--g", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_three_on_numerical_failure() {
    // A deliberately under-resolved hard integrand: the order-doubling
    // self-check reports non-convergence.
    let out = superlab(&[
        "windowed-energy",
        "--n",
        "200",
        "--scaling",
        "inverse-n",
        "--window",
        "30",
        "--quad-order",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("not converged"), "stderr: {err}");
}

#[test]
fn help_exits_zero() {
    let out = superlab(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let out = superlab(&["fig", "--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "g-values = 0.7\nn-max = 3\n# comment\n").unwrap();

    // File value used when no flag is given.
    let out_dir = dir.path().join("a");
    let out = superlab(&[
        "fig",
        "--id",
        "3",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(out_dir.join("fig3.csv")).unwrap();
    assert!(csv.contains("7.00000000000e-1"), "{csv}");
    assert_eq!(csv.lines().count(), 4, "header + 3 rows");

    // Flag beats file.
    let out_dir = dir.path().join("b");
    let out = superlab(&[
        "fig",
        "--id",
        "3",
        "--config",
        cfg.to_str().unwrap(),
        "--g-values",
        "0.4",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(out_dir.join("fig3.csv")).unwrap();
    assert!(csv.contains("4.00000000000e-1"));
    assert!(!csv.contains("7.00000000000e-1"));
}

#[test]
fn unknown_config_key_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "gg = 0.7\n").unwrap();
    let out = superlab(&["fig", "--id", "1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));
}

#[test]
fn quad_order_env_override() {
    // Default density is 200; the environment overrides the default, and a
    // flag overrides the environment.
    let args = ["windowed-energy", "--n", "50", "--g", "0.5"];
    let out = superlab_env(&args, &[("SUPERLAB_QUAD_ORDER", "64")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("quad_density = 64"), "{}", stdout(&out));

    let mut with_flag = args.to_vec();
    with_flag.extend(["--quad-order", "100"]);
    let out = superlab_env(&with_flag, &[("SUPERLAB_QUAD_ORDER", "64")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("quad_density = 100"));
}

#[test]
fn fig3_rows_satisfy_bound_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = superlab(&[
        "fig",
        "--id",
        "3",
        "--n-max",
        "40",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("fig3.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "N,g,E_N_over_hw0,bound");
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let e: f64 = cols[2].parse().unwrap();
        let bound: f64 = cols[3].parse().unwrap();
        assert!(e <= bound * (1.0 + 1e-9), "{line}");
    }
}

#[test]
fn local_energy_and_rotor_emit_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = superlab(&[
        "local-energy",
        "--n",
        "20",
        "--grid",
        "-4:4:41",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("local_energy.csv")).unwrap();
    assert!(csv.starts_with("x,re_local_energy,im_local_energy,scaled_re\n"));
    assert_eq!(csv.lines().count(), 42);

    let out = superlab(&[
        "rotor",
        "--c",
        "1.0",
        "--theta-grid",
        "0.01:3.141592653589793:300",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("rotor.csv")).unwrap();
    // c = 1 has its divergence at θ = π: the last grid point is flagged.
    let last = csv.lines().last().unwrap();
    assert!(last.contains("NaN"), "{last}");
    assert!(last.split(',').nth(2) == Some("1"), "{last}");

    let out = superlab(&[
        "time-evolve",
        "--n",
        "100",
        "--x",
        "0",
        "--t-grid",
        "0:1:11",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("time_evolve.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12);
    // At t = 0 the ratio to itself is exactly 1.
    let first_row = csv.lines().nth(1).unwrap();
    let cols: Vec<&str> = first_row.split(',').collect();
    assert_eq!(cols[3].parse::<f64>().unwrap(), 1.0);
    assert_eq!(cols[4].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn svg_output_is_wellformed_enough(){
    let dir = tempfile::tempdir().unwrap();
    let out = superlab(&[
        "fig",
        "--id",
        "1",
        "--format",
        "svg",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!dir.path().join("fig1.csv").exists(), "svg-only run wrote csv");
    let svg = std::fs::read_to_string(dir.path().join("fig1.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.ends_with("</svg>\n"));
    assert_eq!(svg.matches("<polyline").count(), 5, "one polyline per N");
}

#[test]
fn sidecar_records_resolved_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = superlab(&[
        "fig",
        "--id",
        "5",
        "--n-values",
        "10,50",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let meta = std::fs::read_to_string(dir.path().join("fig5.meta.txt")).unwrap();
    assert!(meta.contains("command = fig5"));
    assert!(meta.contains("n-values = 10,50"));
    assert!(meta.contains("g = 0.5"));
    assert!(meta.contains("t-grid = -1:1:401"));
}
