//! `critline`: command-line access to the scans and verification sweeps.
//!
//! Exit status: 0 when every check is within tolerance, 2 on a tolerance
//! failure, 3 on bad flags or configuration, 4 on a numerical failure.
//! Failures are reported on stderr as a single JSON record.

// `!(x < y)` guards are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use commands::{run, Command, Common};
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "critline",
    version,
    about = "Critical-line scans and identity checks for shifted Xi/1F1 combinations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

fn emit(bytes: &[u8], common: &Common) -> Result<(), CliError> {
    match &common.out {
        Some(path) => {
            std::fs::write(path, bytes).map_err(|source| CliError::Write { path: path.display().to_string(), source })
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Write { path: "<stdout>".into(), source })
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let outcome = run(&cli.command, &cli.common)?;
    emit(&outcome.bytes, &cli.common)?;
    if outcome.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed { failed: outcome.failures.len(), total: outcome.total, failures: outcome.failures })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            let first = message.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("{}", CliError::Usage(first.to_owned()).record());
            return ExitCode::from(error::EXIT_CONFIG as u8);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
