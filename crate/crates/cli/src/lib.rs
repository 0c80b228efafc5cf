//! Command-line front end of `helfrich-core`.
//!
//! Exit codes: 0 success, 2 input error, 3 verification failure,
//! 4 numeric failure.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};

use clap::Parser;

use args::{Cli, Command};
use error::CliError;
use output::{Metadata, Report};

fn params_of(cmd: &Command) -> serde_json::Value {
    let v = match cmd {
        Command::Residual(a) => serde_json::to_value(a),
        Command::Energy(a) => serde_json::to_value(a),
        Command::Fit(a) => serde_json::to_value(a),
        Command::VerifyTheorem(a) => serde_json::to_value(a),
        Command::Sphere(a) => serde_json::to_value(a),
        Command::Rbc(a) => serde_json::to_value(a),
        Command::ProfileExport(a) => serde_json::to_value(a),
    };
    v.unwrap_or(serde_json::Value::Null)
}

fn parse(argv: &[OsString]) -> Result<Cli, clap::Error> {
    let first = Cli::try_parse_from(argv)?;
    match &first.config {
        None => Ok(first),
        Some(path) => {
            let merged = config::merge(argv, first.command.name(), path)
                .map_err(|e| Cli::command_for_error().error(clap::error::ErrorKind::InvalidValue, e.to_string()))?;
            Cli::try_parse_from(merged)
        }
    }
}

impl Cli {
    fn command_for_error() -> clap::Command {
        <Cli as clap::CommandFactory>::command()
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let (report, deferred): (Report, Option<CliError>) = match &cli.command {
        Command::Residual(a) => (commands::residual(a)?, None),
        Command::Energy(a) => (commands::energy(a)?, None),
        Command::Fit(a) => (commands::fit(a)?, None),
        Command::VerifyTheorem(a) => commands::verify(a)?,
        Command::Sphere(a) => (commands::sphere(a)?, None),
        Command::Rbc(a) => (commands::rbc(a)?, None),
        Command::ProfileExport(a) => (commands::profile_export(a)?, None),
    };
    let meta = Metadata::new(cli.command.name(), params_of(&cli.command), cli.format, cli.seed);
    match &cli.output {
        Some(path) => {
            let f = File::create(path)
                .map_err(|e| CliError::Input(format!("cannot create --output {}: {e}", path.display())))?;
            let mut w = BufWriter::new(f);
            report.write(&meta, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            report.write(&meta, &mut lock)?;
            lock.flush()?;
        }
    }
    match deferred {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match parse(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(CliError::Closed) => 0,
        Err(e) => {
            eprintln!("helfrich: {e}");
            e.exit_code()
        }
    }
}
