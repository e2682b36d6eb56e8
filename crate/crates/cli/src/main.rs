//! `chkp`: command-line front end for the solitary-wave stability lab.

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{Command, Flags};

/// Solitary waves of the Camassa–Holm equation and their transverse
/// spectral stability.
#[derive(Parser)]
#[command(name = "chkp", version, allow_negative_numbers = true)]
struct Cli {
    /// Computation to run.
    #[arg(value_enum)]
    command: Command,
    /// Command evaluated at each grid point of a sweep.
    #[arg(value_enum)]
    target: Option<Command>,
    /// Flat `key = value` file; flags on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: Flags,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    let mut flags = cli.flags;
    let mut errors = Vec::new();
    if let Some(path) = &cli.config {
        flags.merge_file(path, &mut errors);
    }
    let cfg = match config::validate(cli.command, cli.target, &flags) {
        Ok(cfg) if errors.is_empty() => cfg,
        Ok(_) => {
            eprintln!("invalid configuration: {}", errors.join("; "));
            return ExitCode::from(2);
        }
        Err(more) => {
            errors.extend(more);
            eprintln!("invalid configuration: {}", errors.join("; "));
            return ExitCode::from(2);
        }
    };

    match run::run(&cfg) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
