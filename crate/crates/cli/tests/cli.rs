//! End-to-end binary tests: exit codes, determinism, file contracts.

use std::path::Path;
use std::process::{Command, Output};

const CONFIG: &str = r#"
[model]
M = 1.0
Omega = 1.0
gamma0_bar = 1.0

[env]
omega_L = 10.0
omega_U = 20.0
m = 1.0
T = 0.1
n_unobserved = 50
n_observed_per_mac = 30
n_macrofractions = 2
seed = 42

[run]
t_min = 0.0
t_max = 2.0
t_points = 5
delta_X = 1.0
epsilon_dec = 1e-3
epsilon_ort = 1e-3
"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qbm-sbs"))
}

fn write_config(dir: &Path, content: &str) -> std::path::PathBuf {
    let path = dir.join("run.toml");
    std::fs::write(&path, content).unwrap();
    path
}

fn run_ok(output: &Output) {
    assert!(
        output.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn indicators_single_point_grid_is_row_of_ones() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = bin()
        .args(["indicators", "-c"])
        .arg(&cfg)
        .args(["--set", "run.t_points=1", "--set", "run.t_min=0.0"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    run_ok(&out);
    let csv = std::fs::read_to_string(dir.path().join("indicators.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "t,gamma_abs,overlap_mac_1,overlap_mac_2");
    assert_eq!(lines[1], "0,1,1,1");
}

#[test]
fn indicators_rows_match_grid_and_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let o = bin()
            .args(["indicators", "-c"])
            .arg(&cfg)
            .arg("--out-dir")
            .arg(out)
            .output()
            .unwrap();
        run_ok(&o);
    }
    let a = std::fs::read(out_a.join("indicators.csv")).unwrap();
    let b = std::fs::read(out_b.join("indicators.csv")).unwrap();
    assert_eq!(a, b, "same config + seed must give identical bytes");
    let text = String::from_utf8(a).unwrap();
    assert_eq!(
        text.lines().count(),
        1 + 5,
        "header plus one row per grid point"
    );
    assert!(!text.contains('\r'));
    // a different seed changes the data
    let o = bin()
        .args(["indicators", "-c"])
        .arg(&cfg)
        .args(["--set", "env.seed=43"])
        .arg("--out-dir")
        .arg(dir.path().join("c"))
        .output()
        .unwrap();
    run_ok(&o);
    let c = std::fs::read(dir.path().join("c/indicators.csv")).unwrap();
    assert_ne!(text.as_bytes(), c.as_slice());
}

#[test]
fn means_guard_markers_and_footer() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = bin()
        .args(["means", "-c"])
        .arg(&cfg)
        .args(["--kind", "low-t-f0"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    run_ok(&out);
    let csv = std::fs::read_to_string(dir.path().join("means_low_t_f0.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "t,mean_exact,mean_quadrature,mean_short,mean_long,regime_flags"
    );
    // t = 0: no exact/long values, short-time guard holds
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "0");
    assert_eq!(first[1], "");
    assert_eq!(first[4], "");
    assert_eq!(first[5], "S");
    assert!(lines
        .last()
        .unwrap()
        .starts_with("# max_rel_gap_exact_vs_quadrature = "));
}

#[test]
fn unknown_mean_kind_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = bin()
        .args(["means", "-c"])
        .arg(&cfg)
        .args(["--kind", "mystery"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mystery"));
}

#[test]
fn missing_required_key_reports_name_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let broken = CONFIG.replace("omega_U = 20.0\n", "");
    let cfg = write_config(dir.path(), &broken);
    let out = bin().args(["regime", "-c"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("omega_U"));
}

#[test]
fn regime_zero_separation_fails_with_unit_averages() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = bin()
        .args(["regime", "-c"])
        .arg(&cfg)
        .args(["--set", "run.delta_X=0.0"])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    run_ok(&out);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("verdict: FAIL"), "{stdout}");
    let json: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("regime_report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(json["sbs_pass"], serde_json::Value::Bool(false));
    assert_eq!(json["gamma_time_average"], serde_json::json!(1.0));
}

#[test]
fn validate_subset_and_tolerance_override() {
    // a fast passing subset
    let out = bin()
        .args(["validate", "--only", "expansion-orders"])
        .output()
        .unwrap();
    run_ok(&out);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("[PASS] expansion-orders"), "{stdout}");
    assert!(stdout.contains("1 check(s), 1 passed, 0 failed"));
    // unreachable tolerance: reported failure with measured value, exit 1
    let out = bin()
        .args([
            "validate",
            "--only",
            "quadrature-low-t",
            "--tolerance",
            "1e-15",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("[FAIL] quadrature-low-t"), "{stdout}");
    assert!(stdout.contains("measured"), "{stdout}");
    // unknown check name: usage error
    let out = bin()
        .args(["validate", "--only", "nonsense"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn large_sweep_completes_with_full_row_count() {
    // 10^3 grid points over a 10^3-oscillator environment
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let out = bin()
        .args(["indicators", "-c"])
        .arg(&cfg)
        .args([
            "--set",
            "run.t_points=1000",
            "--set",
            "env.n_unobserved=1000",
            "--set",
            "env.n_observed_per_mac=1000",
            "--set",
            "env.n_macrofractions=1",
        ])
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    run_ok(&out);
    let csv = std::fs::read_to_string(dir.path().join("indicators.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1001);
}

#[test]
fn json_config_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let json = serde_json::json!({
        "model": {"M": 1.0, "Omega": 1.0, "gamma0_bar": 1.0},
        "env": {"omega_L": 10.0, "omega_U": 20.0, "m": 1.0, "T": 0.1,
                 "n_unobserved": 20, "n_observed_per_mac": 10,
                 "n_macrofractions": 1, "seed": 5},
        "run": {"t_min": 0.0, "t_max": 1.0, "t_points": 3, "delta_X": 1.0,
                 "epsilon_dec": 1e-3, "epsilon_ort": 1e-3}
    });
    let path = dir.path().join("run.json");
    std::fs::write(&path, serde_json::to_string_pretty(&json).unwrap()).unwrap();
    let out = bin()
        .args(["indicators", "-c"])
        .arg(&path)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    run_ok(&out);
    assert!(dir.path().join("indicators.csv").exists());
}
