use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "hgauge", version, about = "Finite higher gauge theory on discretized surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that the given documents are well formed and satisfy their axioms.
    Validate(Inputs),
    /// Run the law suites.
    Laws(LawsArgs),
    /// Count connections and connection morphisms.
    Enumerate(EnumerateArgs),
    /// Partition connections into orbits.
    Orbits(OrbitsArgs),
    /// Apply a gauge element to a connection or connection morphism.
    Act(Inputs),
    /// Compose connection morphisms, first to last.
    Compose(Inputs),
    /// Apply a change script to a discretization and transport connections.
    Change(Inputs),
    /// Print a bundled discretization or crossed module.
    Example(ExampleArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Laws(_) => "laws",
            Command::Enumerate(_) => "enumerate",
            Command::Orbits(_) => "orbits",
            Command::Act(_) => "act",
            Command::Compose(_) => "compose",
            Command::Change(_) => "change",
            Command::Example(_) => "example",
        }
    }
}

/// Input documents. `--cm` and `--disc` also accept bundled names
/// (`z2z4`, `s3conj`, `z2z3inv`, `trivial`; `s1`, `s2`, `t2`, `two-face-bigon`),
/// and `--disc -` reads standard input.
#[derive(Debug, Args, Clone, Default)]
pub struct Inputs {
    /// Crossed module file or bundled name.
    #[arg(long, value_name = "FILE|NAME")]
    pub cm: Option<String>,
    /// Discretization file or bundled name; standard input when absent.
    #[arg(long, value_name = "FILE|NAME")]
    pub disc: Option<String>,
    /// Connection file (repeatable).
    #[arg(long, value_name = "FILE")]
    pub conn: Vec<PathBuf>,
    /// Connection morphism file (repeatable).
    #[arg(long, value_name = "FILE")]
    pub morphism: Vec<PathBuf>,
    /// Gauge element file.
    #[arg(long, value_name = "FILE")]
    pub gauge: Option<PathBuf>,
    /// Change script file.
    #[arg(long, value_name = "FILE")]
    pub script: Option<PathBuf>,
    /// Scenario file supplying any of the above that are not given directly.
    #[arg(long, value_name = "FILE")]
    pub scenario: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Emit a JSON report.
    #[arg(long)]
    pub json: bool,
    /// Cap on enumerated assignments and on law cases checked exhaustively.
    #[arg(long, value_name = "N", default_value_t = 10_000_000)]
    pub max_states: u128,
}

impl Default for Common {
    fn default() -> Self {
        Self {
            json: false,
            max_states: 10_000_000,
        }
    }
}

#[derive(Debug, Args)]
pub struct LawsArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Check every law exhaustively; fails if a law has more than --max-states cases.
    #[arg(long)]
    pub exhaustive: bool,
    /// Seed for sampled laws.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cases drawn for a law whose space is too large to check exhaustively.
    #[arg(long, value_name = "N", default_value_t = 100_000, conflicts_with = "exhaustive")]
    pub samples: u128,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Also list every connection.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Args)]
pub struct OrbitsArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Equivalence relation: conn_morphisms, gauge_objects or full.
    #[arg(long, default_value = "full")]
    pub mode: String,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    /// s1, s2, t2, two-face-bigon, z2z4, s3conj, z2z3inv or trivial.
    pub name: String,
    #[command(flatten)]
    pub common: Common,
}
