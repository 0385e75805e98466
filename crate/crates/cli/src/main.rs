use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sbs_cli::commands::{
    cmd_indicators, cmd_means, cmd_regime, cmd_validate, configure_jobs, parse_kinds,
    render_checks, render_report,
};
use sbs_cli::config::load_config;
use sbs_cli::error::CliError;

/// Decoherence and distinguishability indicators for a harmonic oscillator
/// coupled to a random oscillator bath: series emission, verdict reports,
/// and the oracle validation suite.
#[derive(Parser)]
#[command(name = "qbm-sbs", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Config file (.toml or .json)
    #[arg(short, long)]
    config: PathBuf,
    /// Override a config key, e.g. --set env.seed=7 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory (overrides run.out_dir)
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Worker pool size (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate |Γ| and B over the time grid and write indicators.csv
    Indicators(CommonArgs),
    /// Write means_<kind>.csv tables (exact/quadrature/short/long columns)
    Means {
        #[command(flatten)]
        common: CommonArgs,
        /// Which mean: low-t-f0, high-t-gamma, high-t-b, or all
        #[arg(long, default_value = "all")]
        kind: String,
    },
    /// Run the verdict for the configured point; write regime_report.json
    Regime(CommonArgs),
    /// Run the oracle validation suite; exit 0 iff all checks pass
    Validate {
        /// Optional config; only run.fock_budget is consulted
        #[arg(short, long)]
        config: Option<PathBuf>,
        /// Override a config key, e.g. --set run.fock_budget=1e-9
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Comma-separated subset of checks to run
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Replace every check's primary threshold
        #[arg(long)]
        tolerance: Option<f64>,
        /// Worker pool size (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn apply_out_dir(args: &CommonArgs, cfg: &mut sbs_cli::config::RunConfig) {
    if let Some(dir) = &args.out_dir {
        cfg.run.out_dir = dir.display().to_string();
    }
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Indicators(args) => {
            configure_jobs(args.jobs)?;
            let mut cfg = load_config(&args.config, &args.overrides)?;
            apply_out_dir(&args, &mut cfg);
            let path = cmd_indicators(&cfg)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Means { common, kind } => {
            configure_jobs(common.jobs)?;
            let mut cfg = load_config(&common.config, &common.overrides)?;
            apply_out_dir(&common, &mut cfg);
            let kinds = parse_kinds(&cfg, &kind)?;
            for path in cmd_means(&cfg, &kinds)? {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Regime(args) => {
            configure_jobs(args.jobs)?;
            let mut cfg = load_config(&args.config, &args.overrides)?;
            apply_out_dir(&args, &mut cfg);
            let (report, path) = cmd_regime(&cfg)?;
            print!("{}", render_report(&report));
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Validate {
            config,
            overrides,
            only,
            tolerance,
            jobs,
        } => {
            configure_jobs(jobs)?;
            let fock_budget = match config {
                Some(path) => Some(load_config(&path, &overrides)?.run.fock_budget),
                None => None,
            };
            let selection = if only.is_empty() {
                None
            } else {
                Some(only.as_slice())
            };
            let results = cmd_validate(selection, tolerance, fock_budget)?;
            print!("{}", render_checks(&results));
            let failed = results.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                return Err(CliError::ValidationFailed(failed));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
