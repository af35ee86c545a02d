//! Command-line front end for the `qwalk-core` engine.
//!
//! Subcommands write tables as CSV or JSON, plus a `<output>.config.toml`
//! sidecar holding the effective configuration. Exit status is 0 on
//! success, 2 for usage errors, 3 for numeric or domain errors, 4 when a
//! resource limit is hit and 1 for I/O failures.

pub mod args;
pub mod commands;
pub mod error;
pub mod settings;
pub mod table;

use std::ffi::OsString;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::CliResult;
use crate::settings::Settings;

pub fn dispatch(command: &Command) -> CliResult<()> {
    match command {
        Command::Run(a) => commands::run(&Settings::resolve(a)?),
        Command::Sweep(a) => commands::sweep(&Settings::resolve(a)?, false),
        Command::Entropy(a) => commands::sweep(&Settings::resolve(a)?, true),
        Command::Limit(a) => commands::limit(&Settings::resolve(a)?),
        Command::Compare(a) => commands::compare(&Settings::resolve(a)?),
        Command::Classify(a) => commands::classify(&Settings::resolve(a)?),
    }
}

/// Parse `args` and run; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qwalk: {e}");
            e.exit_code()
        }
    }
}
