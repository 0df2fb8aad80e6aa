//! Command-line front end: sweeps, dispersion tables, radius conversion and
//! the verification suites.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use mqed_decay::sweep::{
    dispersion, emit_csv, emit_dispersion_csv, format_radii_table, run_sweep, SweepConfig,
};
use mqed_decay::verify::{verify, Suite, VerifyOptions};

#[derive(Parser)]
#[command(
    version,
    about = "Decay rates of dipoles in absorbing magneto-dielectric media"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Purcell factors over the configured frequency grid and radii.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// ε, μ and n over the configured frequency grid.
    Dispersion {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Print the radius conversion table.
    Radii {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run property suites; exits nonzero if any residual exceeds tolerance.
    Verify {
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Take the medium and frequency band from a sweep config.
        #[arg(long, conflicts_with = "vacuum")]
        config: Option<PathBuf>,
        /// Run against vacuum instead of the example medium.
        #[arg(long)]
        vacuum: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Duality,
    Conventions,
    Oracle,
    Identities,
}

impl SuiteArg {
    fn suite(self) -> Option<Suite> {
        match self {
            SuiteArg::All => None,
            SuiteArg::Duality => Some(Suite::Duality),
            SuiteArg::Conventions => Some(Suite::Conventions),
            SuiteArg::Oracle => Some(Suite::Oracle),
            SuiteArg::Identities => Some(Suite::Identities),
        }
    }
}

fn load(path: &Path) -> Result<SweepConfig> {
    SweepConfig::load(path).with_context(|| format!("loading {}", path.display()))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Sweep { config, output } => {
            let cfg = load(&config)?;
            let rows = run_sweep(&cfg)?;
            emit_csv(&rows, &output)?;
            log::info!("wrote {} rows to {}", rows.len(), output.display());
        }
        Command::Dispersion { config, output } => {
            let samples = dispersion(&load(&config)?)?;
            emit_dispersion_csv(&samples, &output)?;
        }
        Command::Radii { config } => print!("{}", format_radii_table(&load(&config)?)?),
        Command::Verify {
            suite,
            config,
            vacuum,
        } => {
            let opts = match (config, vacuum) {
                (_, true) => VerifyOptions::vacuum(),
                (Some(path), false) => {
                    let cfg = load(&path)?;
                    VerifyOptions {
                        medium: cfg.medium,
                        grid: cfg.omega_grid,
                        ..VerifyOptions::default()
                    }
                }
                (None, false) => VerifyOptions::default(),
            };
            let reports = verify(suite.suite(), &opts);
            for r in &reports {
                print!("{r}");
            }
            let passed = reports.iter().all(|r| r.passed());
            println!(
                "{}",
                if passed {
                    "all suites passed"
                } else {
                    "verification FAILED"
                }
            );
            return Ok(passed);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
