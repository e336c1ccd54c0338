mod commands;
mod config;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use config::{AuditConfig, MapConfig, MapMode, SweepSpec, SweepStrategy, SweepVariable};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] relayic::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "relayic",
    version,
    about = "Interference channel with an out-of-band relay"
)]
struct Cli {
    /// JSON config for the subcommand; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rates of the relaying strategies along one channel parameter.
    Sweep {
        /// One of snr_db, g2, R0, alpha, rho.
        #[arg(long)]
        variable: Option<String>,
        /// Comma list or start:stop:step.
        #[arg(long)]
        values: Option<String>,
        /// Comma list from ghf, cf1, cf2, af, baseline, outer.
        #[arg(long)]
        strategies: Option<String>,
    },
    /// Random constant-gap audit against the outer bound.
    GapAudit {
        #[arg(long)]
        count: Option<usize>,
        /// Draw until this many admissible channels were checked.
        #[arg(long)]
        target_admissible: Option<usize>,
    },
    /// GDoF map over interference levels.
    GdofMap {
        #[arg(long, value_enum)]
        mode: Option<MapMode>,
        /// Points per axis.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        rho: Option<f64>,
    },
    /// Checks the deterministic-model examples.
    DetVerify {
        /// fig1, fig2 or all.
        #[arg(default_value = "all")]
        fixture: String,
    },
}

const DEFAULT_SEED: u64 = 2024;

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Runs the command; `Ok(false)` means a claim or audit failed.
fn run(cli: &Cli) -> Result<bool, CliError> {
    let path = cli.config.as_deref();
    match &cli.command {
        Command::Sweep {
            variable,
            values,
            strategies,
        } => {
            let mut spec: SweepSpec = config::load(path)?;
            if let Some(v) = variable {
                spec.variable = SweepVariable::parse(v)?;
            }
            if let Some(v) = values {
                spec.values = config::parse_values(v)?;
            }
            if let Some(s) = strategies {
                spec.strategies = s
                    .split(',')
                    .filter(|x| !x.trim().is_empty())
                    .map(SweepStrategy::parse)
                    .collect::<Result<_, _>>()?;
            }
            let rows = commands::sweep(&spec)?;
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => commands::sweep_csv(&rows),
                Format::Json => json(&rows),
            };
            emit(cli, &text)?;
            Ok(true)
        }
        Command::GapAudit {
            count,
            target_admissible,
        } => {
            let mut cfg: AuditConfig = config::load(path)?;
            if let Some(c) = count {
                cfg.count = *c;
            }
            if target_admissible.is_some() {
                cfg.target_admissible = *target_admissible;
            }
            let seed = cli.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
            let summary = commands::audit(&cfg, seed)?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Csv => commands::audit_csv(&summary),
                Format::Json => json(&summary),
            };
            emit(cli, &text)?;
            Ok(summary.passed())
        }
        Command::GdofMap { mode, n, rho } => {
            let mut cfg: MapConfig = config::load(path)?;
            if let Some(m) = mode {
                cfg.mode = *m;
            }
            if let Some(n) = n {
                cfg.n = *n;
            }
            if let Some(r) = rho {
                cfg.rho = *r;
            }
            let rows = commands::gdof_map(&cfg)?;
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => commands::map_csv(&rows),
                Format::Json => json(&rows),
            };
            emit(cli, &text)?;
            Ok(true)
        }
        Command::DetVerify { fixture } => {
            let names: Vec<String> = if fixture == "all" {
                vec!["fig1".into(), "fig2".into()]
            } else {
                vec![fixture.clone()]
            };
            let reports = commands::det_verify(&names)?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Csv => commands::det_csv(&reports),
                Format::Json => json(&reports),
            };
            emit(cli, &text)?;
            Ok(reports.iter().all(|r| r.passed()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("relayic: {e}");
            ExitCode::from(2)
        }
    }
}
