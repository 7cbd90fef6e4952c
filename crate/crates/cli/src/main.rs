mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use crate::config::{Format, ToolkitConfig};

#[derive(Debug, Parser)]
#[command(name = "kolmo", version, about = "Coding, compression-distance and randomness toolkit")]
struct Cli {
    /// JSON config file (default: $KOLMO_CONFIG)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for matrix building and censuses
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: commands::Command,
}

/// How a run failed; each kind has its own exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
    External(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::External(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::External(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("kolmo: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut config = ToolkitConfig::load(cli.config.as_deref()).map_err(Failure::Usage)?;
    if let Some(w) = cli.workers {
        config.workers = w;
    }
    if let Some(f) = cli.format {
        config.format = f;
    }
    config.validate().map_err(Failure::Usage)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build_global()
        .map_err(|e| Failure::Data(e.to_string()))?;
    let out = commands::execute(cli.command, &config)?;
    print!("{out}");
    Ok(())
}
