use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

mod commands;
mod config;
mod output;

use config::{Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] loggap::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Library(_) => 1,
            CliError::Io(_) => 3,
        }
    }
}

const THRESHOLD_BREACH: u8 = 2;

fn configure_threads() -> Result<(), CliError> {
    let Ok(text) = std::env::var("LOGGAP_THREADS") else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("LOGGAP_THREADS must be a positive integer, got `{text}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let (outcome, out) = match &cli.command {
        Command::Empirical(a) => (commands::empirical(a)?, a.common.out.clone()),
        Command::Theory(a) => (commands::theory(a)?, a.common.out.clone()),
        Command::Compare(a) => (commands::compare_cmd(a)?, a.common.out.clone()),
        Command::Simulate(a) => (commands::simulate(a)?, a.common.out.clone()),
    };
    output::emit(&outcome.document.render(outcome.format), out.as_deref())?;
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("threshold breached");
            ExitCode::from(THRESHOLD_BREACH)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
