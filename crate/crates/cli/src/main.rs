use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::Failure;

/// Commutation graphs, Born-rule valuations, tomography and KS checks.
#[derive(Debug, Parser)]
#[command(name = "logos", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a commutation graph from vectors or a bundled fixture.
    BuildGraph {
        /// JSON file `{"dim": n, "vectors": [{"re": [..], "im": [..]}, ..]}`.
        #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
        vectors: Option<PathBuf>,
        /// stern-gerlach, two-disjoint-contexts, cabello18 or peres33.
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long, conflicts_with = "fixture")]
        tol: Option<f64>,
        /// Treat the vectors as a seed basis and close it under these
        /// unitaries: hadamard, pauli-x, phase-s, fourier.
        #[arg(long = "unitary", requires = "depth")]
        unitaries: Vec<String>,
        #[arg(long, requires = "vectors")]
        depth: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// List the maximal contexts of a graph.
    Contexts {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// Born-rule valuation of every node.
    Valuate {
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Expand a pure state over one context.
    Superpose {
        #[arg(long)]
        graph: PathBuf,
        /// Node ids of a full context.
        #[arg(long, num_args = 1.., required = true)]
        context: Vec<usize>,
        #[arg(long, conflicts_with = "vector", required_unless_present = "vector")]
        rho: Option<PathBuf>,
        #[arg(long)]
        vector: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Measurement records of a density matrix on every full context.
    Measure {
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        /// Sample this many shots per context instead of exact probabilities.
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, requires = "shots")]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Reconstruct a density matrix from measurement records.
    Tomography {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Search for a global binary valuation. Exit 0 found, 10 impossible,
    /// 11 budget exhausted.
    KsCheck {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = logos_qm::ksvaluation::DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Classify a pair of outcomes on the square of opposition.
    Classify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        psa: PathBuf,
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        pair: Vec<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Draw single outcomes from a quantum situation.
    Sample {
        #[arg(long)]
        qs: PathBuf,
        #[arg(short = 'n', long = "trials")]
        n: usize,
        /// Defaults to $LOGOS_SEED, then 42.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the full trial log here.
        #[arg(long)]
        log: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Graphviz rendering of a graph.
    ExportDot {
        #[arg(long)]
        graph: PathBuf,
        /// Label nodes with these values.
        #[arg(long)]
        psa: Option<PathBuf>,
        /// Draw maximal contexts as clusters.
        #[arg(long)]
        contexts: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Run the Stern-Gerlach walkthrough and print a pass/fail table.
    Reproduce {
        /// Defaults to $LOGOS_SEED, then 42.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = logos_qm::report::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
