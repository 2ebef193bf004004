//! Command-line front end: `photonforge run <config>` and
//! `photonforge list [--json]`.

mod config;
mod format;
mod registry;
mod run;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{parse_list, parse_number, RunConfig};
pub use format::{csv_row, number_row, sig12};
pub use registry::{find, list_json, list_text, registry, Kind, Param, ScenarioSpec};
pub use run::{execute, run_file, thread_pool, Artifacts, PROBABILITY_SUM_TOL, THREADS_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown key '{key}' for scenario {scenario}")]
    UnknownKey {
        line: usize,
        key: String,
        scenario: &'static str,
    },
    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),
    #[error("config does not set 'scenario'")]
    MissingScenario,
    #[error("cannot read {path}: {source}")]
    ConfigRead { path: PathBuf, source: std::io::Error },
    #[error("invalid {THREADS_ENV} value '{0}'")]
    Threads(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invariant violated: {quantity} = {value}")]
    Invariant { quantity: &'static str, value: f64 },
    #[error(transparent)]
    Numeric(#[from] crate::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse { .. }
            | Self::UnknownKey { .. }
            | Self::UnknownScenario(_)
            | Self::MissingScenario
            | Self::ConfigRead { .. }
            | Self::Threads(_) => EXIT_USAGE,
            Self::Io { .. } | Self::Invariant { .. } | Self::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "photonforge", version, about = "Single-photon and photon-pair source simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the scenario described by a key=value config file.
    Run { config: PathBuf },
    /// List scenarios with their default parameters.
    List {
        #[arg(long)]
        json: bool,
    },
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::List { json } => {
            if json {
                println!("{}", list_json());
            } else {
                print!("{}", list_text());
            }
            EXIT_OK
        }
        Command::Run { config } => match run_file(&config) {
            Ok(dir) => {
                println!("wrote {}", dir.display());
                EXIT_OK
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
    }
}
