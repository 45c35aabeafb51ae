mod args;
mod commands;
mod error;
mod format;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::{CliError, CliResult};

fn configure_threads(flag: Option<usize>) -> CliResult<()> {
    let threads = match flag {
        Some(n) => Some(n),
        None => match std::env::var("ETORUS_THREADS") {
            Ok(v) if !v.trim().is_empty() => Some(v.trim().parse::<usize>().map_err(|_| {
                CliError::Config(format!(
                    "ETORUS_THREADS must be a positive integer, got '{v}'"
                ))
            })?),
            _ => None,
        },
    };
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Config("thread count must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads(cli.threads)?;
    match cli.command {
        Command::Info { ty, format } => commands::info(&ty, format),
        Command::Grid {
            which,
            ty,
            format,
            output,
        } => commands::grid(which, &ty, format, output.as_deref()),
        Command::Transform {
            direction,
            ty,
            input,
            output,
            format,
        } => commands::transform(direction, &ty, &input, output.as_deref(), format),
        Command::Eval {
            ty,
            input,
            output,
            resolution,
            points,
            format,
        } => commands::eval(
            &ty,
            &input,
            output.as_deref(),
            resolution,
            points.as_deref(),
            format,
        ),
        Command::Verify { ty, seed, samples } => commands::verify(&ty, seed, samples),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("etorus: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
