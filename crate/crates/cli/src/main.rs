mod commands;
mod config;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use config::{Caps, RunConfig};

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad or missing arguments: exit 2.
    Usage(String),
    /// Size above a cap: exit 3.
    Resource(String),
    /// Verification or route disagreement, or an I/O failure: exit 1.
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Failed(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Resource(m) | CliError::Failed(m) => m,
        }
    }
}

impl From<treemix_core::Error> for CliError {
    fn from(e: treemix_core::Error) -> Self {
        match e {
            treemix_core::Error::ResourceLimit { .. } => {
                CliError::Resource(format!("{e} (TREEMIX_MAX_N raises the CLI caps)"))
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let caps = Caps::from_env();
    let result = commands::run(&config, &caps).and_then(|out| {
        match &config.output_path {
            Some(path) => std::fs::write(path, out.text.as_bytes())?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(out.text.as_bytes())?;
                stdout.flush()?;
            }
        }
        match out.failure {
            Some(msg) => Err(CliError::Failed(msg)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("treemix: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
