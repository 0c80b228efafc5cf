//! `key = value` config files, merged below the command-line flags.

use std::ffi::OsString;
use std::path::Path;

use clap::CommandFactory;

use crate::args::Cli;
use crate::error::CliError;

/// Global options that take a value.
const GLOBAL_VALUED: [&str; 4] = ["--output", "--format", "--seed", "--config"];

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("config line {}: expected `key = value`", i + 1)))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim().trim_matches('"').to_string();
        if key.is_empty() {
            return Err(CliError::Input(format!("config line {}: empty key", i + 1)));
        }
        if key == "config" {
            return Err(CliError::Input(format!(
                "config line {}: config files cannot nest",
                i + 1
            )));
        }
        out.push((key, value));
    }
    Ok(out)
}

fn long_names(cmd: &clap::Command) -> Vec<String> {
    cmd.get_arguments()
        .filter_map(|a| a.get_long().map(str::to_string))
        .collect()
}

/// Inserts the config entries right after the subcommand name so that any
/// repeated flag given later on the command line wins. Keys belonging only
/// to other subcommands are skipped; unknown keys are an input error.
pub fn merge(argv: &[OsString], subcommand: &str, path: &Path) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
    let entries = parse_config(&text)?;
    let root = Cli::command();
    let globals = long_names(&root);
    let sub = root
        .find_subcommand(subcommand)
        .ok_or_else(|| CliError::Input(format!("unknown subcommand {subcommand}")))?;
    let own = long_names(sub);
    let others: Vec<String> = root.get_subcommands().flat_map(long_names).collect();

    let mut inserted: Vec<OsString> = Vec::new();
    for (key, value) in entries {
        if own.contains(&key) || globals.contains(&key) {
            inserted.push(format!("--{key}").into());
            inserted.push(value.into());
        } else if !others.contains(&key) {
            return Err(CliError::Input(format!(
                "unknown config key `{key}` in {}",
                path.display()
            )));
        }
    }

    let pos = subcommand_position(argv, subcommand)
        .ok_or_else(|| CliError::Input(format!("subcommand {subcommand} not found on the command line")))?;
    let mut merged: Vec<OsString> = argv[..=pos].to_vec();
    merged.extend(inserted);
    merged.extend_from_slice(&argv[pos + 1..]);
    Ok(merged)
}

fn subcommand_position(argv: &[OsString], subcommand: &str) -> Option<usize> {
    let mut skip_value = false;
    for (i, arg) in argv.iter().enumerate().skip(1) {
        if skip_value {
            skip_value = false;
            continue;
        }
        let s = arg.to_string_lossy();
        if GLOBAL_VALUED.contains(&s.as_ref()) {
            skip_value = true;
        } else if s == subcommand {
            return Some(i);
        }
    }
    None
}
