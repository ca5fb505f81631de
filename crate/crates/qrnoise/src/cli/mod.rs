//! Command-line front end.

mod args;
mod commands;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use qrnoise_core::Error as CoreError;
use thiserror::Error;

pub use args::{Cli, Command, Grid};

use crate::csv::CsvError;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, files or values: exit status 1.
    #[error("{0}")]
    Input(String),
    /// A mathematical precondition does not hold: exit status 2.
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Precondition(_) => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::RankDeficient { .. }
            | CoreError::Singular
            | CoreError::NotOrthonormal(_)
            | CoreError::NoConvergence { .. }
            | CoreError::Overflow(_) => CliError::Precondition(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<CsvError> for CliError {
    fn from(e: CsvError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command. Returns the exit
/// status; diagnostics go to `err` as a single line.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{}", e.render());
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { 1 } else { 0 }
                }
                _ => {
                    let _ = writeln!(err, "error: {}", first_line(&e.render().to_string()));
                    1
                }
            };
        }
    };
    match commands::dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", first_line(&e.to_string()));
            e.exit_code()
        }
    }
}

fn first_line(s: &str) -> String {
    let line = s.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("unknown error");
    line.strip_prefix("error: ").unwrap_or(line).to_string()
}
