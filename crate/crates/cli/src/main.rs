//! `qca-lab`: verification suites, dispersion and trajectory exports, and
//! the Maxwell/Fock checks of `qca-core` from the command line.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RawConfig;

#[derive(Parser)]
#[command(name = "qca-lab", version, about = "Quantum cellular automata laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RawConfig,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Unitarity, isotropy, translation covariance and closed-form dispersion.
    Verify,
    /// Eigenphases on a Brillouin-zone grid.
    Dispersion,
    /// Wave-packet trajectory on a periodic lattice.
    Evolve,
    /// Rotation identity, Maxwell residuals and the commutator-deviation scan.
    Maxwell,
    /// Completes a unit system from a, tau, unit mass, c, hbar.
    Units,
}

/// An error with its process exit code: 1 for failed verification, 2 for
/// configuration and I/O problems.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    pub fn config(e: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 2,
            error: e.into(),
        }
    }

    pub fn verification(msg: String) -> Self {
        Self {
            code: 1,
            error: anyhow::anyhow!(msg),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = cli.config.resolve().map_err(Failure::config)?;
    if let Ok(threads) = std::env::var("QCA_LAB_THREADS") {
        let n: usize = threads
            .parse()
            .map_err(|_| Failure::config(anyhow::anyhow!("QCA_LAB_THREADS must be an integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(Failure::config)?;
    }
    match cli.command {
        Command::Verify => commands::verify(&cfg),
        Command::Dispersion => commands::dispersion_cmd(&cfg),
        Command::Evolve => commands::evolve(&cfg),
        Command::Maxwell => commands::maxwell(&cfg),
        Command::Units => commands::units(&cfg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
