//! `csm-born`: command-line front end.
//!
//! Exit codes: 0 success or confirmed result, 1 semantically negative
//! result, 2 input or usage error.

mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use csm_born::Tolerance;

use commands::{Failure, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "csm-born", version, about = "Contexts, modalities and the Born rule as linear algebra")]
struct Cli {
    /// Absolute numerical tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Born probabilities of a density operator over one context.
    Born { density: PathBuf, context: PathBuf },
    /// Reconstruct a density operator from frame-function samples.
    GleasonFit { samples: PathBuf },
    /// Certify and fit an orthogonality-preserving ray map.
    Uhlhorn { raymap: PathBuf },
    /// Search for a noncontextual {0,1} valuation (exit 0 if none exists).
    Ks { instance: PathBuf },
    /// Unitary path from the identity to a permutation matrix.
    PermPath {
        permutation: PathBuf,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        /// Include every sampled matrix in the report.
        #[arg(long)]
        emit_samples: bool,
    },
    /// Seeded sequential measurement of a ray through a list of contexts.
    Simulate {
        initial: PathBuf,
        contexts: PathBuf,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
    },
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let tol = Tolerance::with_abs(cli.tol)?;
    match &cli.command {
        Command::Born { density, context } => commands::born(density, context, &tol),
        Command::GleasonFit { samples } => commands::gleason_fit(samples, &tol),
        Command::Uhlhorn { raymap } => commands::uhlhorn(raymap, &tol),
        Command::Ks { instance } => commands::ks(instance, &tol),
        Command::PermPath {
            permutation,
            steps,
            emit_samples,
        } => commands::perm_path(permutation, *steps, *emit_samples, &tol),
        Command::Simulate {
            initial,
            contexts,
            repeats,
        } => commands::simulate(initial, contexts, cli.seed, *repeats, &tol),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            // a closed reader does not change the verdict
            let _ = writeln!(out, "{}", render::render(&report.body, cli.format));
            ExitCode::from(report.exit_code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.0);
            ExitCode::from(2)
        }
    }
}
