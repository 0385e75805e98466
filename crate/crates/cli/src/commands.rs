//! Command implementations: series and report emission with deterministic
//! bytes for fixed config + seed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::checks::{run_checks, CheckResult};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::gfmt::g17;
use sbs_core::indicators::{
    decoherence_factor, generalized_overlap, sample_environment, Separation,
};
use sbs_core::means::{
    mean_exact, mean_long_time, mean_quadrature, mean_short_time, MeanIntegrand, MeanKind,
};
use sbs_core::params::ThermalTime;
use sbs_core::regime::{sbs_verdict, RegimeReport, VerdictWindow};
use sbs_core::special::FrequencyWindow;

/// Relative tolerance used for the quadrature column of the means tables.
pub const MEANS_QUADRATURE_TOL: f64 = 1e-9;

fn ensure_out_dir(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let dir = PathBuf::from(&cfg.run.out_dir);
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

/// Evaluate the indicators over the configured grid and write
/// `indicators.csv` (`t, gamma_abs, overlap_mac_1, ...`).
pub fn cmd_indicators(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let params = cfg.model_params()?;
    let spec = cfg.env_spec()?;
    let sep = Separation::new(cfg.run.delta_x).map_err(|e| CliError::Config(e.to_string()))?;
    let tau = ThermalTime::from_temperature(&params, spec.temperature)?;
    let grid = cfg.time_grid()?;
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config(
            "time grid must be strictly increasing".into(),
        ));
    }
    let (unobserved, observed) = sample_environment(&spec, &params)?;
    let rows: Vec<(f64, f64, Vec<f64>)> = grid
        .par_iter()
        .map(|&t| -> Result<_, CliError> {
            let gamma = decoherence_factor(t, sep, &unobserved, &tau, &params)?;
            let overlaps = observed
                .iter()
                .map(|mac| generalized_overlap(t, sep, mac, &tau, &params))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((t, gamma, overlaps))
        })
        .collect::<Result<_, _>>()?;
    let dir = ensure_out_dir(cfg)?;
    let path = dir.join("indicators.csv");
    let mut out = fs::File::create(&path)?;
    let mut header = String::from("t,gamma_abs");
    for k in 1..=observed.len() {
        header.push_str(&format!(",overlap_mac_{k}"));
    }
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    for (t, gamma, overlaps) in &rows {
        let mut line = format!("{},{}", g17(*t), g17(*gamma));
        for b in overlaps {
            line.push(',');
            line.push_str(&g17(*b));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(path)
}

/// Mean kinds applicable to the configured temperature.
fn applicable_kinds(cfg: &RunConfig) -> Vec<MeanKind> {
    if cfg.env.temperature > 0.0 {
        MeanKind::ALL.to_vec()
    } else {
        vec![MeanKind::LowTF0]
    }
}

/// Write `means_<kind>.csv` tables
/// (`t, mean_exact, mean_quadrature, mean_short, mean_long, regime_flags`)
/// with empty markers outside branch guards, plus a footer comment carrying
/// the worst exact-vs-quadrature relative gap.
pub fn cmd_means(cfg: &RunConfig, kinds: &[MeanKind]) -> Result<Vec<PathBuf>, CliError> {
    let params = cfg.model_params()?;
    let spec = cfg.env_spec()?;
    if spec.omega_l <= params.omega {
        return Err(CliError::Config(format!(
            "env.omega_L ({}) must exceed model.Omega ({}) for an off-resonant window",
            spec.omega_l, params.omega
        )));
    }
    let w = FrequencyWindow::new(spec.omega_l, spec.omega_u, params.omega)?;
    let tau = ThermalTime::from_temperature(&params, spec.temperature)?;
    for kind in kinds {
        if *kind != MeanKind::LowTF0 && spec.temperature == 0.0 {
            return Err(CliError::Config(format!(
                "kind {} requires env.T > 0",
                kind.label()
            )));
        }
    }
    let grid = cfg.time_grid()?;
    let dir = ensure_out_dir(cfg)?;
    let mut paths = Vec::new();
    // (t, exact, quadrature, short, long)
    type MeanRow = (f64, Option<f64>, f64, Option<f64>, Option<f64>);
    for &kind in kinds {
        let rows: Vec<MeanRow> = grid
            .par_iter()
            .map(|&t| -> Result<_, CliError> {
                let exact = if t > 0.0 {
                    Some(mean_exact(kind, t, &w, &tau, &params)?)
                } else {
                    None
                };
                let quad = mean_quadrature(
                    MeanIntegrand::Kind(kind),
                    t,
                    &w,
                    &tau,
                    &params,
                    MEANS_QUADRATURE_TOL,
                )?;
                let short = if w.short_time_ok(t) {
                    Some(mean_short_time(kind, t, &w, &tau, &params)?)
                } else {
                    None
                };
                let long = if w.long_time_ok(t) {
                    Some(mean_long_time(kind, t, &w, &tau, &params)?)
                } else {
                    None
                };
                Ok((t, exact, quad, short, long))
            })
            .collect::<Result<_, _>>()?;
        let path = dir.join(format!("means_{}.csv", kind.label()));
        let mut out = fs::File::create(&path)?;
        out.write_all(b"t,mean_exact,mean_quadrature,mean_short,mean_long,regime_flags\n")?;
        let mut worst_gap = 0.0f64;
        for (t, exact, quad, short, long) in &rows {
            let mut flags = String::new();
            if exact.is_some() {
                flags.push('E');
            }
            if short.is_some() {
                flags.push('S');
            }
            if long.is_some() {
                flags.push('L');
            }
            if flags.is_empty() {
                flags.push('-');
            }
            if let Some(e) = exact {
                if *quad != 0.0 {
                    worst_gap = worst_gap.max(((e - quad) / quad).abs());
                }
            }
            let cell = |v: &Option<f64>| v.map(g17).unwrap_or_default();
            let line = format!(
                "{},{},{},{},{},{}\n",
                g17(*t),
                cell(exact),
                g17(*quad),
                cell(short),
                cell(long),
                flags
            );
            out.write_all(line.as_bytes())?;
        }
        out.write_all(
            format!("# max_rel_gap_exact_vs_quadrature = {}\n", g17(worst_gap)).as_bytes(),
        )?;
        paths.push(path);
    }
    Ok(paths)
}

/// Run the verdict for the configured point and write `regime_report.json`;
/// returns the report for rendering.
pub fn cmd_regime(cfg: &RunConfig) -> Result<(RegimeReport, PathBuf), CliError> {
    let params = cfg.model_params()?;
    let spec = cfg.env_spec()?;
    if spec.omega_l <= params.omega {
        return Err(CliError::Config(format!(
            "env.omega_L ({}) must exceed model.Omega ({})",
            spec.omega_l, params.omega
        )));
    }
    let sep = Separation::new(cfg.run.delta_x).map_err(|e| CliError::Config(e.to_string()))?;
    let w = FrequencyWindow::new(spec.omega_l, spec.omega_u, params.omega)?;
    let window = VerdictWindow::certified(&w);
    let report = sbs_verdict(
        &spec,
        &params,
        sep,
        cfg.run.epsilon_dec,
        cfg.run.epsilon_ort,
        window,
    )?;
    let dir = ensure_out_dir(cfg)?;
    let path = dir.join("regime_report.json");
    let json =
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Config(e.to_string()))?;
    fs::write(&path, json + "\n")?;
    Ok((report, path))
}

/// Human-readable table for a verdict report.
pub fn render_report(report: &RegimeReport) -> String {
    let mut s = String::new();
    let line = "-".repeat(66);
    s.push_str(&line);
    s.push('\n');
    s.push_str(&format!(
        "regime: {:?}    T = {}    ΔX = {}\n",
        report.regime, report.env.temperature, report.delta_x
    ));
    s.push_str(&format!(
        "window: t in [{:.4}, {:.4}] ({} periods x {} points)\n",
        report.window.t_start,
        report.window.t_start
            + report.window.periods as f64 * 2.0 * std::f64::consts::PI / report.model.omega,
        report.window.periods,
        report.window.points_per_period
    ));
    s.push_str(&line);
    s.push('\n');
    if report.timescales.is_empty() {
        s.push_str("timescales: (no closed forms for this regime/separation)\n");
    } else {
        s.push_str("kind            tau_derived     tau_nominal\n");
        for ts in &report.timescales {
            s.push_str(&format!(
                "{:<15} {:<15.6e} {:<15.6e}\n",
                ts.kind.label(),
                ts.tau_derived,
                ts.tau_nominal
            ));
        }
    }
    if !report.bounds.is_empty() {
        s.push_str("kind            eps        bound_exact     bound_fast      (ΔX²N)\n");
        for b in &report.bounds {
            s.push_str(&format!(
                "{:<15} {:<10.1e} {:<15.6e} {:<15.6e}\n",
                b.kind.label(),
                b.epsilon,
                b.bound_exact,
                b.bound_fast
            ));
        }
    }
    let tc = &report.temperature_constraint;
    s.push_str(&format!(
        "temperature constraint: {} (lhs {:.4e} vs rhs {:.4e})\n",
        if tc.satisfied {
            "satisfied"
        } else {
            "violated"
        },
        tc.lhs,
        tc.rhs
    ));
    if let Some(r) = report.macrofraction_ratio_bound {
        s.push_str(&format!(
            "macrofraction ratio bound N_obs/N_unobs > {r:.4e}\n"
        ));
    }
    s.push_str(&format!(
        "time-averaged |Γ| = {:.6e} (ε_dec {:.1e})\n",
        report.gamma_time_average, report.epsilon_dec
    ));
    for (k, b) in report.overlap_time_averages.iter().enumerate() {
        s.push_str(&format!(
            "time-averaged B_{} = {:.6e} (ε_ort {:.1e})\n",
            k + 1,
            b,
            report.epsilon_ort
        ));
    }
    s.push_str(&line);
    s.push('\n');
    s.push_str(&format!(
        "verdict: {}\n",
        if report.sbs_pass { "PASS" } else { "FAIL" }
    ));
    s
}

/// Run the validation checks and render one line per check. Returns the
/// results; the caller decides the exit code.
pub fn cmd_validate(
    only: Option<&[String]>,
    tolerance: Option<f64>,
    fock_budget: Option<f64>,
) -> Result<Vec<CheckResult>, CliError> {
    run_checks(only, tolerance, fock_budget)
}

/// One `[PASS]`/`[FAIL]` line per check.
pub fn render_checks(results: &[CheckResult]) -> String {
    let mut s = String::new();
    for r in results {
        s.push_str(&format!(
            "[{}] {:<32} measured = {:<12.4e} threshold = {:<10.2e} {}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.measured,
            r.threshold,
            r.detail
        ));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    s.push_str(&format!(
        "{} check(s), {} passed, {} failed\n",
        results.len(),
        results.len() - failed,
        failed
    ));
    s
}

/// Configure the global worker pool; call before any parallel work.
pub fn configure_jobs(jobs: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

/// Parse a means-kind selector.
pub fn parse_kinds(cfg: &RunConfig, kind: &str) -> Result<Vec<MeanKind>, CliError> {
    match kind {
        "all" => Ok(applicable_kinds(cfg)),
        "low-t-f0" => Ok(vec![MeanKind::LowTF0]),
        "high-t-gamma" => Ok(vec![MeanKind::HighTGamma]),
        "high-t-b" => Ok(vec![MeanKind::HighTB]),
        other => Err(CliError::Config(format!(
            "unknown mean kind '{other}' (use low-t-f0, high-t-gamma, high-t-b, or all)"
        ))),
    }
}

/// Shared runner so tests can invoke commands without spawning the binary.
pub fn write_all_outputs(cfg: &RunConfig, dir_override: Option<&Path>) -> Result<(), CliError> {
    let mut cfg = cfg.clone();
    if let Some(d) = dir_override {
        cfg.run.out_dir = d.display().to_string();
    }
    cmd_indicators(&cfg)?;
    cmd_means(&cfg, &applicable_kinds(&cfg))?;
    cmd_regime(&cfg)?;
    Ok(())
}
