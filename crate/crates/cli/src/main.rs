mod commands;
mod manifest;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "exch", version, about = "Binary exchangeable laws, their moments and mixing measures")]
pub struct Cli {
    /// Compute with exact rationals instead of f64.
    #[arg(long, global = true)]
    pub exact: bool,

    /// Print a human-readable table instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,

    /// Write the JSON result to this file.
    #[arg(short, long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count law of the first N coordinates of a family.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "N")]
        n: usize,
    },
    /// Monte Carlo estimate of the count law.
    Sample {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Mixed moments E[X_1 ... X_k], or moments of the empirical mean with --sn.
    Moments {
        #[arg(long)]
        law: PathBuf,
        #[arg(long = "K")]
        k: usize,
        #[arg(long)]
        sn: bool,
    },
    /// Index tuples in {1..n}^k grouped by number of distinct entries.
    Tuples {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Count by enumeration instead of the closed form.
        #[arg(long)]
        oracle: bool,
    },
    /// Law of the empirical mean of the first N coordinates.
    Definetti {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "N")]
        n: usize,
    },
    /// Fit a measure on a grid to a list of moments.
    Recover {
        #[arg(long)]
        moments: PathBuf,
        #[arg(long, env = "EXCH_GRID", default_value_t = 200)]
        grid: usize,
        #[arg(long, env = "EXCH_TOL", default_value_t = 1e-6)]
        tol: f64,
    },
    /// Probabilities of the mixture of i.i.d. coins directed by a measure.
    Synth {
        #[arg(long)]
        measure: PathBuf,
        /// Bit vector such as 1,0,1; prints its probability.
        #[arg(long, conflicts_with = "k", required_unless_present = "k")]
        x: Option<String>,
        /// Prints the count law of the first k coordinates.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Compare a law with the mixture directed by a measure.
    Verify {
        #[arg(long)]
        law: PathBuf,
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        kmax: usize,
        /// Defaults to 0 with --exact and 1e-9 otherwise.
        #[arg(long, env = "EXCH_VERIFY_TOL")]
        tol: Option<String>,
    },
    /// Run the exact enumeration checks.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Iid,
    Polya,
    Explicit,
    Mixture,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    /// Success probability for iid.
    #[arg(long)]
    pub p: Option<String>,
    /// Initial ones for polya.
    #[arg(long)]
    pub a: Option<String>,
    /// Initial zeros for polya.
    #[arg(long)]
    pub b: Option<String>,
    /// Count law file for explicit.
    #[arg(long)]
    pub law: Option<PathBuf>,
    /// Measure file for mixture.
    #[arg(long)]
    pub measure: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match commands::run(&cli, argv) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("{}", serde_json::json!({"error": err.kind(), "message": err.to_string()}));
            ExitCode::from(1)
        }
    }
}
