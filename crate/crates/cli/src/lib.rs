//! The `qtm` command-line tool.
//!
//! Every command reads a JSON machine file (see [`machine_file`]) and prints a line-oriented
//! report, or the same data as JSON with `--json`. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | usage, parse or domain error |
//! | 2 | the table is not unitary, or the halting theorem is violated |
//! | 3 | the stationarity condition fails, so no agreement is claimed |
//! | 4 | the validator and the cyclic-tape oracle disagree |

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod commands;
pub mod error;
pub mod format;
pub mod machine_file;

pub use error::CliError;
pub use machine_file::{Machine, MachineFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_NOT_STATIONARY: i32 = 3;
pub const EXIT_DISAGREEMENT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "qtm", version, about = "Validate and run quantum Turing machines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the four local unitarity conditions and list every violation.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Evolve from an encoded input: exact state and output distribution, or one sampled run
    /// of the halting protocol with `--seed`.
    Run {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        start: Start,
        /// Sample one monitored run with this seed instead of computing exactly.
        #[arg(long, env = "QTM_SEED")]
        seed: Option<u64>,
    },
    /// Compare the monitored and unmonitored output distributions. Stationarity is checked on
    /// the trajectory from the given input only.
    CompareHalting {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        start: Start,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// Build the step matrix on a cyclic tape and check it against the validator.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5)]
        cells: usize,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
}

#[derive(Args, Debug)]
pub struct Common {
    /// Machine file (JSON).
    pub machine: PathBuf,
    /// Emit the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct Start {
    /// Input string over the non-blank symbols, e.g. `ab` or `a,b`.
    #[arg(long, default_value = "")]
    pub input: String,
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
}

/// Captured result of one invocation.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the tool on `args` (including the program name) without touching the process streams.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code, stdout: String::new(), stderr: text }
            } else {
                Output { code, stdout: text, stderr: String::new() }
            };
        }
    };
    match commands::execute(&cli.command) {
        Ok((code, stdout)) => Output { code, stdout, stderr: String::new() },
        Err(e) => Output {
            code: EXIT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
