//! `leapfrog`: command-line front end of `leapfrog-core`.
//!
//! Exit status 0 on success, 2 when the inputs are rejected (usage or
//! validation errors), 1 when a run fails after starting. Errors are written
//! to stderr as a single JSON object `{"error": {"kind", "message", ...}}`.

mod args;
mod commands;
mod emit;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use emit::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    let (format, output) = (cli.format, cli.output);
    match &cli.command {
        Command::Equilibria(m) => commands::equilibria_cmd(m, format, output),
        Command::Classify(m) => commands::classify_cmd(m, format, output),
        Command::Simulate { model, integration } => commands::simulate_cmd(model, integration, format, output),
        Command::Portrait(p) => commands::portrait_cmd(p, format, output),
        Command::Parallel(p) => commands::parallel_cmd(p, format, output),
        Command::Pdecheck(p) => commands::pdecheck_cmd(p, format, output),
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
            CliError::usage(e.render().to_string().trim_end()).report();
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.exit_code == 0 => ExitCode::SUCCESS,
        Err(e) => {
            e.report();
            ExitCode::from(e.exit_code as u8)
        }
    }
}
