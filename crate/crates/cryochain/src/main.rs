//! Command-line entry point. Exit codes: 0 success, 1 numerical or physical
//! failure, 2 bad input or configuration. Set CRYOCHAIN_LOG=info (or debug)
//! for progress logging.

use std::path::Path;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cryochain::commands::{self, SummaryRow};
use cryochain::config::{self, LoadedConfig};
use cryochain::report::OutputStage;
use cryochain::{sweep, AppError};

/// Readout-chain planning toolkit: noise cascades, Y-factor calibration,
/// shot simulation, and stage power budgets.
#[derive(Parser)]
#[command(name = "cryochain", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Friis cascade over a frequency grid.
    Chain(RunArgs),
    /// Y-factor extraction and DUT de-embedding from a measurement CSV.
    Noisecal(RunArgs),
    /// Dispersive readout shot simulation and classification.
    Readout(RunArgs),
    /// Stage power plan and bias-topology comparison.
    Budget(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration (JSON with a matching "command" field).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for artifacts.
    #[arg(long)]
    out: PathBuf,
    /// Override the config's RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Map one scalar config key over a value list: key=v1,v2,...
    #[arg(long)]
    sweep: Option<String>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Chain(_) => "chain",
            Command::Noisecal(_) => "noisecal",
            Command::Readout(_) => "readout",
            Command::Budget(_) => "budget",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Chain(a) | Command::Noisecal(a) | Command::Readout(a) | Command::Budget(a) => {
                a
            }
        }
    }
}

fn dispatch(
    name: &str,
    loaded: &LoadedConfig,
    seed: Option<u64>,
    out_dir: &Path,
) -> Result<SummaryRow, AppError> {
    match name {
        "chain" => commands::chain::run(&loaded.body()?, &loaded.dir, out_dir),
        "noisecal" => commands::noisecal::run(&loaded.body()?, &loaded.dir, out_dir),
        "readout" => commands::readout::run(&loaded.body()?, seed, out_dir),
        "budget" => commands::budget::run(&loaded.body()?, out_dir),
        other => Err(AppError::invalid(format!("unknown command {other:?}"))),
    }
}

fn run(cli: &Cli) -> Result<(), AppError> {
    let name = cli.command.name();
    let args = cli.command.args();
    let loaded = config::load_config(&args.config)?;
    let declared = loaded.command()?;
    if declared != name {
        return Err(AppError::invalid(format!(
            "{}: config command {declared:?} does not match subcommand {name:?}",
            loaded.path.display()
        )));
    }
    match &args.sweep {
        None => {
            dispatch(name, &loaded, args.seed, &args.out)?;
            Ok(())
        }
        Some(arg) => {
            let spec = sweep::parse_sweep(arg)?;
            let mut rows = Vec::new();
            for (i, token) in spec.tokens.iter().enumerate() {
                let value = sweep::with_override(&loaded.value, &spec.key, token)?;
                let modified = LoadedConfig {
                    path: loaded.path.clone(),
                    dir: loaded.dir.clone(),
                    value,
                };
                let sub = args.out.join(sweep::subdir_name(&spec.key, i));
                log::info!("sweep {}={token} -> {}", spec.key, sub.display());
                rows.push(dispatch(name, &modified, args.seed, &sub)?);
            }
            let csv = sweep::summary_csv(&spec.key, &spec.tokens, &rows);
            let mut stage = OutputStage::new(&args.out)?;
            stage.write("sweep_summary.csv", &csv)?;
            stage.commit()
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CRYOCHAIN_LOG")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
