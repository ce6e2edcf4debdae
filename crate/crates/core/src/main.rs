use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use periodlab::cli::{run_classify, run_conjecture_sweep, run_verify_matrices, ClassifyOptions, Report};

#[derive(Parser)]
#[command(
    name = "periodlab",
    version,
    about = "Linear periods of GL(2n) through their Langlands parameters"
)]
struct Args {
    /// Cuspidal catalog in TOML; the built-in catalog is used otherwise.
    #[arg(long, global = true, env = "PERIODLAB_CATALOG")]
    catalog: Option<PathBuf>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a parameter such as `St(3,q8) + chi3`.
    Classify {
        expr: String,
        /// Confirm the symbolic answers with the matrix oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Check the explicit forms, permutations and SL(2) representations.
    VerifyMatrices {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 8)]
        max_k: usize,
    },
    /// Check every relative discrete series up to a dimension bound.
    Sweep {
        #[arg(long, default_value_t = 12)]
        max_dim: u64,
    },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let catalog = args.catalog.as_deref();
    let report: Report = match &args.command {
        Command::Classify { expr, oracle } => run_classify(expr, catalog, ClassifyOptions { oracle: *oracle }),
        Command::VerifyMatrices { max_n, max_k } => run_verify_matrices(*max_n, *max_k),
        Command::Sweep { max_dim } => run_conjecture_sweep(catalog, *max_dim),
    };
    if args.json {
        println!("{}", report.to_json());
    } else {
        println!("{report}");
    }
    ExitCode::from(report.exit_code as u8)
}
