//! `electra`: batch runner over directories of election files.
//!
//! Subcommands cover the full pipeline: validation, completion of
//! incomplete elections, normalized sampling, similarity statistics,
//! temporal measures, the map of elections, restricted-domain analysis,
//! voting-rule comparisons, and synthetic sampling. All outputs are
//! deterministic given `--seed`.

mod commands;
mod common;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "electra", version, about = "Election analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Election files (processed in sorted path order).
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Worker threads; falls back to ELECTRA_JOBS, then all cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Linearize tied ballot groups `{..}` lower-index-first instead of
    /// rejecting them.
    #[arg(long)]
    break_ties: bool,
}

#[derive(Args)]
struct FormatArgs {
    /// Emit JSON.
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV (the default).
    #[arg(long)]
    csv: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse files and report problems.
    Validate {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Complete an incomplete election by the maximum-edge-biclique
    /// heuristic.
    Complete {
        input: PathBuf,
        output: PathBuf,
        /// Restart budget of the heuristic.
        #[arg(long, default_value_t = 32)]
        effort: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Draw normalized elections from the relevant complete inputs.
    Normalize {
        #[command(flatten)]
        input: InputArgs,
        /// Candidates per normalized election.
        #[arg(short, long, default_value_t = 15)]
        m: usize,
        /// Voters per normalized election.
        #[arg(short, long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relevance threshold on the candidate count.
        #[arg(long, default_value_t = 15)]
        min_candidates: usize,
        /// Output directory for the numbered files.
        #[arg(long)]
        out: PathBuf,
    },
    /// Similarity summaries and parameterized-algorithm budgets.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Temporal measures; vote order in the file is the temporal order.
    Timeseries {
        #[command(flatten)]
        input: InputArgs,
        /// Also emit the shuffled baseline per file.
        #[arg(long)]
        shuffle_baseline: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed elections into the 2-D map (CSV: id,x,y,dataset_tag).
    Map {
        #[command(flatten)]
        input: InputArgs,
        /// Include the compass anchors and their paths.
        #[arg(long)]
        compass: bool,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dense pairwise positionwise distance matrix.
    Distances {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        compass: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write per-dataset average distances to this file.
        #[arg(long)]
        groups_out: Option<PathBuf>,
    },
    /// Restricted-domain membership, certificates, and deletion distances.
    Domains {
        #[command(flatten)]
        input: InputArgs,
        /// Compute voter/candidate deletion distances.
        #[arg(long)]
        distances: bool,
        /// Budget for the deletion distances; exact when omitted.
        #[arg(long)]
        max_budget: Option<usize>,
        /// Emit JSON (the only supported format; accepted for symmetry).
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Venn overlap tables of domain membership within deletion distances.
    Venn {
        #[command(flatten)]
        input: InputArgs,
        /// Budget override for both deletion modes.
        #[arg(long)]
        max_budget: Option<usize>,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Condorcet analysis, voting-rule consensus, and tie fractions.
    Rules {
        #[command(flatten)]
        input: InputArgs,
        /// Include the pairwise consensus matrices.
        #[arg(long)]
        pairwise: bool,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Sample synthetic elections from a statistical culture.
    Sample {
        /// One of: impartial, walsh_sp, conitzer_sp, identity, antagonism.
        #[arg(long)]
        culture: String,
        #[arg(short, long, default_value_t = 15)]
        m: usize,
        #[arg(short, long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for the numbered files.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ok = match cli.command {
        Command::Validate { input } => commands::validate(&input),
        Command::Complete { input, output, effort, seed } => {
            commands::complete(&input, &output, effort, seed)
        }
        Command::Normalize { input, m, n, count, seed, min_candidates, out } => {
            commands::normalize(&input, m, n, count, seed, min_candidates, &out)
        }
        Command::Stats { input, format } => commands::stats(&input, &format),
        Command::Timeseries { input, shuffle_baseline, seed, out } => {
            commands::timeseries(&input, shuffle_baseline, seed, out.as_deref())
        }
        Command::Map { input, compass, iterations, seed, out } => {
            commands::map(&input, compass, iterations, seed, out.as_deref())
        }
        Command::Distances { input, compass, out, groups_out } => {
            commands::distances(&input, compass, out.as_deref(), groups_out.as_deref())
        }
        Command::Domains { input, distances, max_budget, json: _, out } => {
            commands::domains(&input, distances, max_budget, out.as_deref())
        }
        Command::Venn { input, max_budget, format } => {
            commands::venn(&input, max_budget, &format)
        }
        Command::Rules { input, pairwise, format } => commands::rules(&input, pairwise, &format),
        Command::Sample { culture, m, n, count, seed, out } => {
            commands::sample(&culture, m, n, count, seed, &out)
        }
    };
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

pub(crate) use {FormatArgs as Format, InputArgs as Inputs};
