//! Library half of the `qexp` command-line tool: argument definitions,
//! subcommand bodies, JSON reports and CSV emitters.

pub mod args;
pub mod commands;
pub mod format;
pub mod input;
pub mod report;
pub mod sweep;

use args::{Cli, Command};
use clap::Parser;
use commands::Outcome;

/// Runs one invocation from raw arguments (program name first).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => report::exit::OK,
                _ => report::exit::USAGE,
            };
            return Outcome {
                stdout: if code == report::exit::OK { e.to_string() } else { String::new() },
                stderr: if code == report::exit::OK { None } else { Some(e.to_string()) },
                code,
            };
        }
    };
    match &cli.command {
        Command::Shift(a) => commands::shift(a),
        Command::Entropy(a) => commands::entropy(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Maxent(a) => commands::maxent(a),
        Command::Compose(a) => commands::compose_cmd(a),
        Command::Escort(a) => commands::escort(a),
    }
}
