//! `polar-scl` command-line front end.
//!
//! Every SNR on the command line is `Es/N0` in dB (with `Es = 1`), never
//! `Eb/N0`. Exit codes: 0 success, 2 usage, 3 capacity or guard, 4 numerical
//! tolerance failure, 1 anything else (I/O, malformed input files).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(
    name = "polar-scl",
    version,
    about = "Polar code construction, SCL bounds and BLER simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
enum Command {
    /// Build an information set and write it as code JSON.
    Construct(ConstructArgs),
    /// Evaluate the SCL lower bound and the SC upper bounds over an SNR grid.
    Bound(BoundArgs),
    /// Monte Carlo BLER sweep.
    Simulate(SimulateArgs),
    /// Minimum weight distribution of a code.
    Mwd(MwdArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Method {
    Ga,
    Weight,
    Bs,
    /// Most reliable first, read from `--sequence`.
    Sequence,
}

#[derive(Args, Debug, Serialize)]
struct ConstructArgs {
    /// Block length N (a power of two).
    #[arg(long = "n")]
    len: usize,
    /// Number of information bits.
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum)]
    method: Method,
    /// List size, required by `bs`.
    #[arg(long)]
    list: Option<usize>,
    /// Design Es/N0 in dB.
    #[arg(long = "snr-db", default_value_t = 0.0, allow_negative_numbers = true)]
    snr_db: f64,
    /// Reliability sequence file for `sequence`: 1-based indices, most reliable first.
    #[arg(long)]
    sequence: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Swap log destination for `bs` (JSON lines). Defaults to `<out>.swaps.jsonl`.
    #[arg(long = "swap-log")]
    swap_log: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Debug, Serialize)]
struct SnrGrid {
    #[arg(long = "snr-from", allow_negative_numbers = true)]
    from: f64,
    #[arg(long = "snr-to", allow_negative_numbers = true)]
    to: f64,
    #[arg(long = "snr-step", default_value_t = 0.5)]
    step: f64,
}

#[derive(Args, Debug, Serialize)]
struct BoundArgs {
    #[arg(long)]
    code: PathBuf,
    #[arg(long, default_value_t = 2)]
    list: usize,
    #[command(flatten)]
    snr: SnrGrid,
    /// Keep the `L_{k-m} < -alpha` region instead of relaxing it.
    #[arg(long, conflicts_with = "discard_alpha")]
    alpha: Option<f64>,
    /// Relax the region to `L_{k-m} < 0` (the default).
    #[arg(long = "discard-alpha")]
    discard_alpha: bool,
    /// Number of minimum-weight codewords; required when K > 24.
    #[arg(long = "a-dmin")]
    a_dmin: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    #[arg(long)]
    code: PathBuf,
    /// sc, scl, cascl or ml.
    #[arg(long)]
    decoder: String,
    #[arg(long, default_value_t = 1)]
    list: usize,
    /// CRC generator polynomial in hex, without the leading term.
    #[arg(long = "crc-poly", requires = "crc_len")]
    crc_poly: Option<String>,
    #[arg(long = "crc-len", requires = "crc_poly")]
    crc_len: Option<usize>,
    #[command(flatten)]
    snr: SnrGrid,
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    #[arg(long = "stop-errors", default_value_t = 100)]
    stop_errors: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "all-zero")]
    all_zero: bool,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    #[serde(skip)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct MwdArgs {
    #[arg(long)]
    code: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Error, Debug)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    /// A documented limitation was hit (e.g. exact enumeration out of reach).
    #[error("{0}")]
    Guard(String),
    #[error(transparent)]
    Core(#[from] polar_scl::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use polar_scl::Error as E;
        match self {
            CliError::Usage(_) | CliError::Core(E::InvalidArgument(_)) => 2,
            CliError::Guard(_) | CliError::Core(E::Capacity { .. }) => 3,
            CliError::Core(E::Integration { .. }) => 4,
            _ => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = serde_json::to_value(&cli.command).expect("arguments serialize");
    let result = match &cli.command {
        Command::Construct(a) => commands::construct(a, &spec),
        Command::Bound(a) => commands::bound(a, &spec),
        Command::Simulate(a) => commands::simulate(a, &spec),
        Command::Mwd(a) => commands::mwd(a, &spec),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
