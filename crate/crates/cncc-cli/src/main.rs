//! Batch front-end for the cncc toolkit.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{cmd_analyze, cmd_enumerate, cmd_simulate, cmd_sweep_beta, CommandOutcome};
use config::{preset, ConfigError, ConfigFile, Experiment};

#[derive(Parser)]
#[command(
    name = "cncc",
    version,
    about = "Convolutional network-coded cooperation: weight enumeration, BER bounds, and link-level simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weight table, free distance, dominant patterns, and the
    /// diversity/throughput table
    Enumerate(CommonArgs),
    /// Closed-form end-to-end BER bound over an SNR grid
    Analyze(CommonArgs),
    /// Monte Carlo BER sweep over an SNR grid, bound column included
    Simulate(CommonArgs),
    /// Monte Carlo BER against the relay position at fixed SNR
    #[command(name = "sweep-beta")]
    SweepBeta(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Config file (line-oriented `key = value` with sections)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in network preset 1..=4
    #[arg(long)]
    preset: Option<u8>,
    /// Master RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relay-destination SNR grid in dB, comma separated
    #[arg(long, value_delimiter = ',')]
    snr_db: Option<Vec<f64>>,
    /// Nakagami shape of the source-relay channels
    #[arg(long)]
    m: Option<u32>,
    /// Relay position ratio d_sd / d_sr
    #[arg(long)]
    beta: Option<f64>,
    /// Bit errors to collect per point before stopping
    #[arg(long)]
    stop_errors: Option<u64>,
    /// Round budget per point
    #[arg(long)]
    max_rounds: Option<u64>,
}

fn resolve(args: &CommonArgs, subcommand: &str) -> Result<Experiment, ConfigError> {
    let mut exp = Experiment::default();
    if let Some(path) = &args.config {
        ConfigFile::load(path)?.apply(&mut exp, subcommand)?;
    }
    if let Some(idx) = args.preset {
        let (antennas, generator, label) = preset(idx)?;
        exp.antennas = antennas;
        exp.generator = generator;
        exp.label = label;
    }
    if let Some(seed) = args.seed {
        exp.seed = seed;
    }
    if let Some(grid) = &args.snr_db {
        if grid.is_empty() {
            return Err(ConfigError("--snr-db needs at least one point".into()));
        }
        exp.snr_db = grid.clone();
    }
    if let Some(m) = args.m {
        exp.nakagami_m = m;
    }
    if let Some(beta) = args.beta {
        exp.beta = beta;
    }
    if let Some(errors) = args.stop_errors {
        exp.stop.target_errors = errors;
    }
    if let Some(rounds) = args.max_rounds {
        exp.stop.max_rounds = rounds;
    }
    Ok(exp)
}

fn dispatch(
    subcommand: &str,
    args: &CommonArgs,
    csv: &mut dyn Write,
    summary: &mut dyn Write,
) -> Result<CommandOutcome, ConfigError> {
    let exp = resolve(args, subcommand)?;
    match subcommand {
        "enumerate" => cmd_enumerate(&exp, csv, summary),
        "analyze" => cmd_analyze(&exp, csv, summary),
        "simulate" => cmd_simulate(&exp, csv, summary),
        "sweep-beta" => cmd_sweep_beta(&exp, csv, summary),
        _ => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (subcommand, args) = match &cli.command {
        Command::Enumerate(a) => ("enumerate", a),
        Command::Analyze(a) => ("analyze", a),
        Command::Simulate(a) => ("simulate", a),
        Command::SweepBeta(a) => ("sweep-beta", a),
    };
    let mut summary = std::io::stderr().lock();
    let result = match &args.out {
        Some(path) => {
            let file = match std::fs::File::create(path) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("cncc: cannot create {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            };
            let mut csv = std::io::BufWriter::new(file);
            let r = dispatch(subcommand, args, &mut csv, &mut summary);
            if let Err(e) = csv.flush() {
                eprintln!("cncc: flush failed: {e}");
                return ExitCode::from(2);
            }
            r
        }
        None => {
            let mut csv = std::io::stdout().lock();
            dispatch(subcommand, args, &mut csv, &mut summary)
        }
    };
    match result {
        Ok(CommandOutcome { flagged: false }) => ExitCode::SUCCESS,
        Ok(CommandOutcome { flagged: true }) => {
            eprintln!("cncc: some points finished flagged");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("cncc: {e}");
            ExitCode::from(2)
        }
    }
}
