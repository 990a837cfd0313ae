mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "turan", version, about = "Exact Turán numbers and partition diagnostics for k-uniform hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a named construction as an edge list.
    Construct(ConstructArgs),
    /// Test a graph for freeness; exit 1 if it contains the pattern.
    Check(CheckArgs),
    /// Exact Turán number of one pattern at one order.
    Ex(ExArgs),
    /// Check ex(n, core:l+1) against the Turán count and uniqueness.
    VerifyMubayi(RangeArgs),
    /// Tabulate ex(n, exp:l+1) against the Turán count and core family.
    ProbeMain(RangeArgs),
    /// Tabulate the pair {exp:k+2, K_(k+1)} against its members.
    ProbeNp(ProbeNpArgs),
    /// Closeness of every near-extremal free graph to the Turán graph.
    Spectrum(SpectrumArgs),
    /// Partition diagnostics and closeness for one graph.
    Stability(StabilityArgs),
    /// Edit distance between two graphs on the same vertex count.
    EditDistance(EditDistanceArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
struct SearchArgs {
    /// JSONL result cache, read and appended.
    #[arg(long)]
    #[serde(skip)]
    cache: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    node_budget: Option<u64>,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    time_budget: Option<f64>,
    #[arg(long, default_value_t = turan_core::search::DEFAULT_ISO_LEVELS)]
    iso_levels: usize,
    /// Enumerate all extremal graphs up to isomorphism.
    #[arg(long)]
    enumerate: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
struct ConstructArgs {
    /// turan:n,l,k | exp:l,k | complete:m,k | blowup:FILE,t
    spec: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Clone, Serialize)]
struct CheckArgs {
    /// Edge-list file.
    graph: PathBuf,
    /// Pattern: core:l | exp:l | file:PATH | graph:k:n:a-b-c+... | all(p,q,...)
    pattern: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Clone, Serialize)]
struct ExArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    pattern: String,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Clone, Serialize)]
struct RangeArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    n_max: usize,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Clone, Serialize)]
struct ProbeNpArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n_max: usize,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Clone, Serialize)]
struct SpectrumArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    pattern: String,
    /// Include graphs with at least ex - slack edges.
    #[arg(long, default_value_t = 0)]
    slack: usize,
    /// Number of parts of the reference Turán graph.
    #[arg(long)]
    l: usize,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Threshold {
    Parts,
    Family,
}

#[derive(Args, Debug, Clone, Serialize)]
struct StabilityArgs {
    graph: PathBuf,
    #[arg(long)]
    l: usize,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Threshold::Parts)]
    threshold: Threshold,
    /// Use the local-search partition for closeness even when exact search is possible.
    #[arg(long)]
    heuristic: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Clone, Serialize)]
struct EditDistanceArgs {
    first: PathBuf,
    second: PathBuf,
    /// Upper bound by local improvement instead of exhaustive search.
    #[arg(long)]
    heuristic: bool,
    #[command(flatten)]
    output: Output,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code.into(),
        Err(e) => {
            eprintln!("error: {e}");
            commands::error_code(&e).into()
        }
    }
}
