use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

mod commands;
mod error;
mod matrix_file;
mod render;

use error::CliError;

/// Parallel sums of PSD matrices and perturbation bounds.
#[derive(Debug, Parser)]
#[command(name = "parsum", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[command(next_help_heading = "Global options")]
struct GlobalArgs {
    /// Relative rank cutoff for pseudoinverses (default n * machine epsilon)
    #[arg(long, global = true, value_name = "REL")]
    tol_rank: Option<f64>,
    /// Eigenvalue slack for PSD and Loewner checks
    #[arg(long, global = true, default_value_t = 1e-9, value_name = "TOL")]
    tol_psd: f64,
    /// Slack for identity residuals
    #[arg(long, global = true, default_value_t = 1e-8, value_name = "TOL")]
    tol_residual: f64,
    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,
    /// Write output here instead of stdout (a directory for `examples`)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ProblemInput {
    /// Use a built-in example problem instead of matrix files
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), conflicts_with = "files")]
    example: Option<u8>,
    /// Matrix files for A, B, X and Y
    #[arg(value_name = "FILE", num_args = 4)]
    files: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct Window {
    /// Smallest t
    #[arg(long, default_value_t = 1e-4)]
    t_min: f64,
    /// Largest t
    #[arg(long, default_value_t = 1e4)]
    t_max: f64,
    /// Number of log-spaced t values
    #[arg(long, default_value_t = 256)]
    points: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Error norm and the three bounds on it, with relative errors
    Bounds {
        #[command(flatten)]
        input: ProblemInput,
        #[command(flatten)]
        window: Window,
    },
    /// Tabulate f(t) on a log-spaced grid as CSV
    Scan {
        #[command(flatten)]
        input: ProblemInput,
        #[command(flatten)]
        window: Window,
    },
    /// Write the matrices of a built-in example
    Examples {
        /// Example number, 1 or 2
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        /// Example 1: base angle in radians
        #[arg(long)]
        base: Option<f64>,
        /// Example 1: perturbed angle for A in radians
        #[arg(long)]
        a_angle: Option<f64>,
        /// Example 1: perturbed angle for B in radians
        #[arg(long)]
        b_angle: Option<f64>,
        /// Example 2: projection angles for A, B, X, Y in radians
        #[arg(long, value_delimiter = ',', num_args = 4)]
        angles: Option<Vec<f64>>,
    },
    /// Check the library's properties on random problems
    Fuzz {
        /// Master seed; each trial derives its own
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Smallest matrix dimension
        #[arg(long, default_value_t = 1)]
        dim_min: usize,
        /// Largest matrix dimension
        #[arg(long, default_value_t = 8)]
        dim_max: usize,
        /// Real entries only
        #[arg(long)]
        real: bool,
        /// Only full-rank random matrices
        #[arg(long)]
        full_rank: bool,
        /// Never draw projection quadruples
        #[arg(long)]
        no_projections: bool,
    },
    /// Join of two PSD matrices, or the scaled join with --alpha/--beta
    Join {
        x: PathBuf,
        y: PathBuf,
        /// Weight on X; needs --beta
        #[arg(long, requires = "beta")]
        alpha: Option<f64>,
        /// Weight on Y; needs --alpha
        #[arg(long, requires = "alpha")]
        beta: Option<f64>,
    },
    /// Parallel sum of two PSD matrices
    Psum { a: PathBuf, b: PathBuf },
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
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Violations(_)) {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}
