//! `geogate`: train variational circuits with and without a generator
//! network, analyze the recorded angle trajectories, and export the data
//! behind the Bloch-sphere, group-map, kinematics and comparison figures.

mod args;
mod commands;
mod manifest;
mod reproduce;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;
use geogate_core::Error;

use args::{Cli, Command};

/// Process exit codes.
pub mod exit {
    pub const USAGE: u8 = 1;
    pub const DATA: u8 = 2;
    pub const NUMERIC: u8 = 3;
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(exit::USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code)
        }
    }
}

/// A failed command: the message printed to stderr and the exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn data(message: impl Into<String>) -> Self {
        Self {
            code: exit::DATA,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: exit::USAGE,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Self {
            code: exit_code(&err),
            message: err.to_string(),
        }
    }
}

pub type CmdResult<T = ()> = Result<T, Failure>;

pub fn run(cli: Cli, argv: &[String]) -> CmdResult {
    match cli.command {
        Command::Train(a) => commands::train(&a, argv),
        Command::Analyze(a) => commands::analyze(&a, argv),
        Command::Groupmap(a) => commands::groupmap(&a, argv),
        Command::Kinematics(a) => commands::kinematics(&a, argv),
        Command::Deviation(a) => commands::deviation(&a, argv),
        Command::Bloch(a) => commands::bloch(&a, argv),
        Command::Plateau(a) => commands::plateau(&a, argv),
        Command::Compare(a) => commands::compare(&a, argv),
        Command::Reproduce(a) => reproduce::run(&a, argv),
        Command::Replay(a) => manifest::replay(&a),
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::LogBranchSingularity
        | Error::NotSpecialUnitary { .. }
        | Error::NotInAlgebra { .. }
        | Error::NotNormalized(_) => exit::NUMERIC,
        Error::InvalidConfig(_)
        | Error::QubitCountOutOfRange(_)
        | Error::QubitOutOfRange { .. }
        | Error::RepeatedQubit(_)
        | Error::NotSingleQubit(_)
        | Error::ColumnOutOfRange { .. } => exit::USAGE,
        _ => exit::DATA,
    }
}
