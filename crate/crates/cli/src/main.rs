//! ghlab: batch front end for the small-space Gromov-Hausdorff toolkit.
//!
//! Exit codes: 0 success (including budget-exhausted results, flagged in the
//! payload), 1 I/O failure, 2 input parse failure, 3 validation failure.

mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ghlab_core::{Tag, DEFAULT_NODE_BUDGET};

#[derive(Parser)]
#[command(
    name = "ghlab",
    version,
    about = "Exact GH distances, embeddings, equilateral sets, and certified \
             imbalance/packing bounds for small metric spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// RNG seed for multistart searches (the GHLAB_SEED environment variable
    /// overrides this flag).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Multistart count for derivative-free searches.
    #[arg(long, global = true, default_value_t = 40)]
    pub starts: usize,

    /// Pattern-search iterations per start.
    #[arg(long, global = true, default_value_t = 4000)]
    pub iters: usize,

    /// Output format (csv is available for audit and sweep).
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TagArg {
    Exact,
    Upper,
    Lower,
}

impl From<TagArg> for Tag {
    fn from(t: TagArg) -> Tag {
        match t {
            TagArg::Exact => Tag::Exact,
            TagArg::Upper => Tag::Upper,
            TagArg::Lower => Tag::Lower,
        }
    }
}

#[derive(Subcommand)]
pub enum Command {
    /// Exact GH distance between two finite metric spaces.
    Gh {
        /// JSON file with {"labels": [...], "dist": [[...], ...]}.
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// Node budget for the branch-and-bound search.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        nodes: u64,
    },
    /// Minimal-distortion embedding of a space into a normed model.
    Embed {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
    /// Equilateral-set search (--m), or equilateral-dimension evidence (--ed).
    Equilateral {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, conflicts_with = "ed")]
        m: Option<usize>,
        /// Report the largest m (up to 2^dim) for which the search succeeds.
        #[arg(long)]
        ed: bool,
        /// Relative spread below which a configuration counts as equilateral.
        #[arg(long, default_value_t = ghlab_core::tol::EQUILATERAL_TOL)]
        tol: f64,
    },
    /// Upper certificate for the metric imbalance c_m.
    Imbalance {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// Upper certificate for the packing radius R_m.
    Packing {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// Bracket audit between c_m and R_m, including the constructive step.
    Audit {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// GH lower bound from an equilateral spec and an imbalance certificate.
    Bound {
        /// Common distance of the equilateral set.
        #[arg(long)]
        d: f64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        c_value: f64,
        #[arg(long, value_enum)]
        c_tag: TagArg,
    },
    /// Lambda sweep: scale an equilateral witness of the source model and
    /// bound the GH distance to the target model at every scale.
    Sweep {
        #[arg(long)]
        x_model: PathBuf,
        #[arg(long)]
        y_model: PathBuf,
        #[arg(long)]
        m: usize,
        /// Comma-separated positive scale factors.
        #[arg(long, value_delimiter = ',', required = true)]
        lambdas: Vec<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
