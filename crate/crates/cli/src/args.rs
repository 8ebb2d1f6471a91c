use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

use qalign::{Alphabet, Backend, HammingMode};

#[derive(Debug, Parser)]
#[command(name = "qalign", version, about = "Simulated quantum search for Hamming-distance sequence alignment")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fixed-iteration search for an exact match of the query.
    Exact(ExactArgs),
    /// Level-by-level search for an optimal Hamming alignment.
    Align(AlignArgs),
    /// Marked-state probability against iteration count, as CSV.
    Trace(TraceArgs),
    /// Many seeded runs, summarised.
    Stats(StatsArgs),
    /// Show residue codes and their bit strings.
    Encode(EncodeArgs),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum AlphabetArg {
    #[default]
    Protein,
    Dna,
}

impl From<AlphabetArg> for Alphabet {
    fn from(a: AlphabetArg) -> Self {
        match a {
            AlphabetArg::Protein => Alphabet::Protein,
            AlphabetArg::Dna => Alphabet::Dna,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[default]
    Bit,
    Residue,
}

impl From<ModeArg> for HammingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Bit => HammingMode::Bit,
            ModeArg::Residue => HammingMode::Residue,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    #[default]
    Dense,
    Classes,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Dense => Backend::Dense,
            BackendArg::Classes => Backend::Classes,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Where the search instance comes from.
#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// FASTA database; each record is one domain.
    #[arg(long, value_name = "PATH", required_unless_present = "synthetic")]
    pub db: Option<PathBuf>,

    /// Query residues given inline.
    #[arg(long, conflicts_with = "query_file", required_unless_present_any = ["query_file", "synthetic"])]
    pub query: Option<String>,

    /// Query read from a file (first FASTA record, or plain residues).
    #[arg(long, value_name = "PATH")]
    pub query_file: Option<PathBuf>,

    /// Synthetic instance `N_PRIME:N_TARGETS` instead of sequences.
    #[arg(long, value_name = "N_PRIME:N_TARGETS", conflicts_with_all = ["db", "query", "query_file"])]
    pub synthetic: Option<String>,

    #[arg(long, value_enum, default_value_t)]
    pub alphabet: AlphabetArg,

    /// Bit-level or residue-level Hamming distance.
    #[arg(long, value_enum, default_value_t)]
    pub mode: ModeArg,

    /// Never report windows that span two database records.
    #[arg(long)]
    pub no_domain_crossing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Master seed; falls back to $QALIGN_SEED, then 0.
    #[arg(long, env = "QALIGN_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Growth factor of the iteration bound.
    #[arg(long, default_value_t = qalign::bbht::DEFAULT_LAMBDA)]
    pub lambda: f64,

    /// Oracle budget per run, in units of sqrt(n').
    #[arg(long, default_value_t = qalign::bbht::DEFAULT_TIMEOUT_FACTOR)]
    pub timeout_factor: f64,

    #[arg(long, value_enum, default_value_t)]
    pub backend: BackendArg,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Iteration count; defaults to the single-target optimum.
    #[arg(long)]
    pub k: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct AlignArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Full searches per distance level.
    #[arg(long, short, default_value_t = qalign::align::DEFAULT_REPEATS)]
    pub r: u32,
    /// Largest distance to try; defaults to about a third of the query mismatching.
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Also collect every other window at the optimal distance.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Hamming distance to mark.
    #[arg(long, default_value_t = 0)]
    pub level: u32,
    /// Last iteration count; defaults to ceil(3 sqrt(n')).
    #[arg(long)]
    pub k_max: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum StatsKind {
    /// Unknown-count search at one distance level.
    #[default]
    Bbht,
    /// Full optimal-alignment runs.
    Align,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 1000)]
    pub trials: u32,
    #[arg(long, value_enum, default_value_t)]
    pub kind: StatsKind,
    /// Distance level for `--kind bbht`.
    #[arg(long, default_value_t = 0)]
    pub level: u32,
    /// Repeats per level for `--kind align`.
    #[arg(long, short, default_value_t = qalign::align::DEFAULT_REPEATS)]
    pub r: u32,
    /// Largest distance for `--kind align`.
    #[arg(long)]
    pub n_max: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct EncodeArgs {
    /// Residues to encode.
    pub sequence: String,
    #[arg(long, value_enum, default_value_t)]
    pub alphabet: AlphabetArg,
    #[command(flatten)]
    pub output: OutputArgs,
}
