use std::path::PathBuf;
use std::process::ExitCode;

use auxtherm_cli::{run, CliError, Command, RunConfig};
use auxtherm_core::Prefactor;
use clap::{Parser, Subcommand};

/// Thermodynamics of atoms coupled through auxiliary Klein-Gordon fields.
#[derive(Parser)]
#[command(name = "auxtherm", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(clap::Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to `[output] dir`, then `.`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Normalization of the field energy.
    #[arg(long, value_parser = ["paper", "dos"])]
    prefactor: Option<String>,
}

#[derive(Subcommand)]
enum Sub {
    /// Per-channel scales, critical temperatures and the global threshold.
    Poles(Common),
    /// The universal curve f(alpha, tau) and its tau-derivative.
    Fcurve(Common),
    /// Field energy and heat capacity per channel and in total.
    Heatcap(Common),
    /// Classical mean energy against the mode cutoff.
    ClassicalEnergy(Common),
    /// Cross-check every analytic shortcut against brute-force oracles.
    Validate(Common),
}

fn execute(cli: Cli) -> Result<String, CliError> {
    let (command, common) = match cli.command {
        Sub::Poles(c) => (Command::Poles, c),
        Sub::Fcurve(c) => (Command::Fcurve, c),
        Sub::Heatcap(c) => (Command::Heatcap, c),
        Sub::ClassicalEnergy(c) => (Command::ClassicalEnergy, c),
        Sub::Validate(c) => (Command::Validate, c),
    };
    let prefactor = common
        .prefactor
        .as_deref()
        .map(str::parse::<Prefactor>)
        .transpose()?;
    let cfg = RunConfig::load(&common.config)?;
    run(command, &cfg, common.out.as_deref(), prefactor)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::ValidationFailed { report, .. } = &e {
                println!("{report}");
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
