//! `tropca`: tropical PCA from the command line.

mod data;
mod manifest;
mod milp_cmd;
mod pca;
mod plot;
mod simulate_cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Exit codes: 0 success, 1 I/O, 2 bad input, 3 non-ultrametric input,
/// 4 plot dimension.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    pub fn io(msg: impl Into<String>) -> Self {
        Failure { code: 1, msg: msg.into() }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Failure { code: 2, msg: msg.into() }
    }
}

impl From<tropca::Error> for Failure {
    fn from(e: tropca::Error) -> Self {
        let code = match e {
            tropca::Error::Io(_) => 1,
            tropca::Error::NotUltrametric => 3,
            _ => 2,
        };
        Failure { code, msg: e.to_string() }
    }
}

pub type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "tropca", version, about = "Tropical PCA for point clouds and equidistant trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate ultrametric gene trees (Newick plus a CSV of distances).
    Simulate(simulate_cmd::Args),
    /// Fit a tropical linear space or polytope to points or trees.
    Pca(pca::Args),
    /// Write the polytope-fitting MILP as an LP file, or check a solution.
    ExportMilp(milp_cmd::Args),
    /// Draw an SVG of points in the plane x_1 = 0.
    Plot(plot::Args),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Stiefel,
    Polytope,
}

fn configure_threads() -> CmdResult {
    let Ok(raw) = std::env::var("TROPCA_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::input(format!("TROPCA_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::io(e.to_string()))
}

pub fn write_file(path: &PathBuf, bytes: &[u8]) -> CmdResult {
    std::fs::write(path, bytes).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = configure_threads().and_then(|()| match cli.command {
        Command::Simulate(a) => simulate_cmd::run(a),
        Command::Pca(a) => pca::run(a),
        Command::ExportMilp(a) => milp_cmd::run(a),
        Command::Plot(a) => plot::run(a),
    });
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tropca: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
