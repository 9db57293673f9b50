use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toepnull::enumeration::DEFAULT_BUDGET;

#[derive(Debug, Parser)]
#[command(
    name = "toepnull",
    version,
    about = "Nullity counts and kernel structure of Toeplitz matrices over GF(q)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// N(m, nu) for m = 0..n from the transition automaton.
    Table(Common),
    /// Rank distribution of order-n matrices.
    Spectrum(Common),
    /// Exhaustive check of the transition rules and kernel-structure predicates.
    Verify(VerifyArgs),
    /// Number of extension chains from one matrix realizing a nullity string.
    CountString(CountStringArgs),
    /// GF(2) closed forms against their automaton counterparts for m <= n.
    ClosedForms(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Matrix order; order n means (n+1) x (n+1).
    #[arg(long, default_value_t = 4)]
    pub n: usize,

    /// Field size, a prime.
    #[arg(long, default_value_t = 2)]
    pub q: u32,

    /// Report only this nullity.
    #[arg(long)]
    pub nullity: Option<usize>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads for exhaustive scans [default: available cores].
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,

    /// Largest number of matrices of one order a scan may enumerate.
    #[arg(long, env = "TOEPNULL_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,

    /// Seed for sampled checks.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Also count by exhaustive enumeration and compare.
    #[arg(long)]
    pub check_brute_force: bool,

    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    pub fn jobs(&self) -> usize {
        match self.jobs {
            Some(j) => j as usize,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,

    /// Additionally sample this many random specs beyond the exhaustive range.
    #[arg(long, default_value_t = 0)]
    pub samples: u64,

    /// Order of the sampled specs.
    #[arg(long, default_value_t = 32)]
    pub sample_order: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CountStringArgs {
    #[command(flatten)]
    pub common: Common,

    /// Starting pair "prev,cur"; cur must equal the first string entry.
    #[arg(long)]
    pub start: String,

    /// Comma-separated nullities.
    #[arg(long)]
    pub string: String,
}
