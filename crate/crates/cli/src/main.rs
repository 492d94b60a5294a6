//! `gbz`: spectra, scans and figure data for non-reciprocal chains.
//!
//! Every subcommand reads a flat `key = value` config (or a manifest from an
//! earlier run), writes its CSV files atomically into `--out`, and finishes
//! with `manifest.json`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 config error, 3 solver failure,
//! 4 oracle mismatch in `--verify` mode.

mod commands;
mod config;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{Command, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "gbz", version, about = "Exact spectra of non-reciprocal chains under generalized boundaries")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Spectrum with θ roots, Bloch factors and IPR.
    Spectrum(Common),
    /// Boundary-plane grid for one or more chain lengths.
    Scan(Common),
    /// Spectral flow along a boundary route.
    Flow(Common),
    /// SSH phase diagram for one boundary class.
    Phase(Common),
    /// Bloch factors of every eigenstate.
    Gbz(Common),
    /// Fragility of the skin effect over a size ladder.
    Fragility(Common),
    /// Corner or edge localization of a 2D model over a size ladder.
    Twod(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// `key = value` config file or a manifest.json from an earlier run.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, env = "GBZ_WORKERS", value_name = "INT")]
    workers: Option<usize>,
    /// Also diagonalize densely and compare.
    #[arg(long)]
    verify: bool,
    /// Verification tolerance relative to max(1, spectral radius).
    #[arg(long, value_name = "FLOAT")]
    tolerance: Option<f64>,
    /// Seed for the oracle's inverse-iteration start vectors.
    #[arg(long, value_name = "INT")]
    seed: Option<u64>,
    /// Overrides one config key; repeatable, wins over the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Cmd {
    fn split(self) -> (Command, Common) {
        match self {
            Cmd::Spectrum(c) => (Command::Spectrum, c),
            Cmd::Scan(c) => (Command::Scan, c),
            Cmd::Flow(c) => (Command::Flow, c),
            Cmd::Phase(c) => (Command::Phase, c),
            Cmd::Gbz(c) => (Command::Gbz, c),
            Cmd::Fragility(c) => (Command::Fragility, c),
            Cmd::Twod(c) => (Command::Twod, c),
        }
    }
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Io(String),
    Config(String),
    Solver(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Solver(_) => 3,
            Failure::Mismatch(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(m) => write!(f, "i/o error: {m}"),
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Solver(m) => write!(f, "solver failure: {m}"),
            Failure::Mismatch(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<gbz_core::Error> for Failure {
    fn from(e: gbz_core::Error) -> Self {
        use gbz_core::Error as E;
        match e {
            E::Config(m) => Failure::Config(m),
            E::InvalidSpec(_) | E::OffMuLine { .. } | E::DimensionCap { .. } => {
                Failure::Config(e.to_string())
            }
            E::Io(err) => Failure::Io(err.to_string()),
            other => Failure::Solver(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = cli.command.split();
    let result = RunConfig::resolve(command, &common).and_then(|cfg| commands::run(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("gbz: {f}");
            ExitCode::from(f.code())
        }
    }
}
