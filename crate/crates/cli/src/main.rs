//! `tamegraph` command-line front end.

mod commands;
mod runlog;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

/// Tame plane graphs: classification, enumeration, LP bounds and interval
/// verification.
#[derive(Debug, Clone, Parser, Serialize, Deserialize, PartialEq)]
#[command(name = "tamegraph", version)]
pub struct RunConfig {
    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Report wall-clock seconds in TSV reports instead of `-`.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Append a JSON-lines run log to this file.
    #[arg(long, global = true)]
    pub log: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize, PartialEq)]
pub enum Command {
    /// Named constants and tables.
    #[command(subcommand)]
    Constants(ConstantsCmd),
    /// Single-graph utilities.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Tameness checks.
    #[command(subcommand)]
    Tame(TameCmd),
    /// Generate tame graphs by patch enumeration.
    Enumerate(EnumerateArgs),
    /// Archive comparison.
    #[command(subcommand)]
    Archive(ArchiveCmd),
    /// Linear relaxations.
    #[command(subcommand)]
    Lp(LpCmd),
    /// Interval verification of inequality specs.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize, PartialEq)]
pub enum ConstantsCmd {
    /// Print every constant as `key=value`.
    Dump,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize, PartialEq)]
pub enum GraphCmd {
    /// Canonical code and canonically labeled form of each graph in a file,
    /// or of a catalog graph.
    Canon { file: String },
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize, PartialEq)]
pub enum TameCmd {
    /// TSV of property verdicts and minimum admissible weight.
    Check { archive: String },
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub max_vertices: usize,
    /// `tri-quad` or `all`.
    #[arg(long, default_value = "all")]
    pub faces: String,
    /// Disable one prune by name; `all` disables every prune.
    #[arg(long = "no-prune")]
    pub no_prune: Vec<String>,
    /// Stop after this many search states; the archive is marked partial.
    #[arg(long)]
    pub max_states: Option<usize>,
    /// Archive path; stdout when absent.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize, PartialEq)]
pub enum ArchiveCmd {
    /// Graphs of B missing from A (`-`) and extra in A (`+`).
    Diff { a: String, b: String },
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct ModelArgs {
    /// Graph file (first graph line) or catalog name.
    #[arg(long)]
    pub graph: String,
    /// Inequality database; none means identities only.
    #[arg(long)]
    pub db: Option<String>,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize, PartialEq)]
pub enum LpCmd {
    /// Export the relaxation in LP text format.
    Build {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: Option<String>,
    },
    /// Solve an LP text file.
    Solve { file: String },
    /// Branch and bound against the 8 pt target.
    Bound {
        #[command(flatten)]
        model: ModelArgs,
        /// Branching script.
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Try to derive `sum coef * var <= le` (or `>= ge`) from the model.
    Derive {
        #[command(flatten)]
        model: ModelArgs,
        /// `name=coef`, repeatable.
        #[arg(long = "term", required = true)]
        terms: Vec<String>,
        #[arg(long, conflicts_with = "ge", required_unless_present = "ge", allow_hyphen_values = true)]
        le: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        ge: Option<f64>,
    },
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize, PartialEq)]
pub enum VerifyCmd {
    /// Verify every spec in a file; TSV of id, status, cells, seconds.
    Run {
        specs: String,
        #[arg(long, default_value_t = tamegraph::geometry::DEFAULT_BUDGET)]
        budget: usize,
    },
}

/// How a command ended.
pub enum Outcome {
    Success,
    /// The run completed but the answer was negative: not tame, not
    /// eliminated, not proven, archives differ.
    Negative,
}

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let jobs = cfg.jobs;
    match tamegraph::par::with_jobs(jobs, || commands::run(&cfg)) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
