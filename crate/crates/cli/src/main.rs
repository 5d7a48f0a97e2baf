mod args;
mod commands;
mod config;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::CliConfig;
use error::{CliError, CliResult};

const THREADS_ENV: &str = "LOGOS_ENTANGLE_THREADS";

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| CliError::Threads(raw.clone()))?;
    if n == 0 {
        return Err(CliError::Threads(raw));
    }
    // a pool may already exist when embedded; the cap is then best effort
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn run(cli: Cli) -> CliResult<String> {
    configure_threads()?;
    let cfg = CliConfig::resolve(&cli.global)?;
    match cli.command {
        Command::Classify { state } => commands::classify::run(&state, &cfg),
        Command::Ks { projectors } => commands::ks::run(&projectors, &cfg),
        Command::Chsh {
            state,
            settings,
            optimal,
            shots,
        } => commands::chsh::run(&state, settings.as_deref(), optimal, shots, &cfg),
        Command::Psa { state, projectors } => commands::psa::run(&state, &projectors, &cfg),
        Command::Reconstruct { psa, projectors } => commands::reconstruct::run(&psa, projectors.as_deref(), &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            let _ = stdout.flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
