//! `fptclust` — command-line front end for the clustering toolkit.
//!
//! Subcommands: `solve` (approximation solvers), `oracle` (brute-force
//! optimum), `coreset` (client reduction), `gen` (adversarial instance
//! generators), `verify` (structural check suite), `bench` (solver-vs-oracle
//! CSV batches).
//!
//! Configuration precedence is flags over `FPTC_`-prefixed environment
//! variables over built-in defaults. Exit codes: 0 success, 1 malformed
//! input or failed checks, 2 enumeration budget exceeded, 3 instance too
//! large for exhaustive verification.

mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fptclust_core::metric::Objective;
use fptclust_core::solver::Maximizer;
use fptclust_core::Error;

#[derive(Parser)]
#[command(name = "fptclust", version, about = "FPT approximation toolkit for metric clustering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an approximation solver on an instance file.
    Solve(SolveArgs),
    /// Compute the exact optimum by brute force.
    Oracle(OracleArgs),
    /// Reduce an instance's clients to a weighted coreset.
    Coreset(CoresetArgs),
    /// Generate formulas, games, coverage systems and embedded instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run the structural check suite on an instance.
    Verify(VerifyArgs),
    /// Benchmark solvers against the brute-force oracle; emits CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Median,
    Means,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Median => Objective::Median,
            ObjectiveArg::Means => Objective::Means,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    /// Infer from the instance file: a matroid field selects matroid, an
    /// opening cost selects fl, otherwise the objective decides.
    Auto,
    Median,
    Means,
    Matroid,
    Fl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MaximizerArg {
    Exact,
    Cg,
    Greedy,
}

impl MaximizerArg {
    pub fn as_str(self) -> &'static str {
        match self {
            MaximizerArg::Exact => "exact",
            MaximizerArg::Cg => "cg",
            MaximizerArg::Greedy => "greedy",
        }
    }
}

impl From<MaximizerArg> for Maximizer {
    fn from(m: MaximizerArg) -> Self {
        match m {
            MaximizerArg::Exact => Maximizer::Exact,
            MaximizerArg::Cg => Maximizer::ContinuousGreedy,
            MaximizerArg::Greedy => Maximizer::Greedy,
        }
    }
}

#[derive(Args)]
pub struct SolveArgs {
    /// Instance file (JSON).
    #[arg(long, env = "FPTC_INPUT")]
    pub input: PathBuf,
    /// Approximation parameter.
    #[arg(long, env = "FPTC_EPSILON", default_value_t = 0.3)]
    pub epsilon: f64,
    /// Override the instance's number of centers.
    #[arg(long, env = "FPTC_K")]
    pub k: Option<usize>,
    /// Override the instance's objective.
    #[arg(long, env = "FPTC_OBJECTIVE", value_enum)]
    pub objective: Option<ObjectiveArg>,
    /// Problem variant to solve.
    #[arg(long, env = "FPTC_VARIANT", value_enum, default_value_t = VariantArg::Auto)]
    pub variant: VariantArg,
    /// Inner submodular maximization engine.
    #[arg(long, env = "FPTC_MAXIMIZER", value_enum, default_value_t = MaximizerArg::Cg)]
    pub maximizer: MaximizerArg,
    /// Largest gamma of the facility-location bicriteria sweep.
    #[arg(long, env = "FPTC_GAMMA_MAX", default_value_t = 2.0)]
    pub gamma_max: f64,
    /// Uniform facility opening cost (fl variant; overrides the file).
    #[arg(long, env = "FPTC_OPEN_COST")]
    pub open_cost: Option<f64>,
    /// Ceiling on the number of enumerated guesses.
    #[arg(long, env = "FPTC_BUDGET", default_value_t = 10_000_000)]
    pub budget: u64,
    /// Seed for all randomized components.
    #[arg(long, env = "FPTC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Restart rounds for the randomized inner engine.
    #[arg(long, env = "FPTC_BOOST", default_value_t = 10)]
    pub boost: usize,
    /// Worker thread count (defaults to all cores).
    #[arg(long, env = "FPTC_THREADS")]
    pub threads: Option<usize>,
    /// Reduce clients to a coreset before solving.
    #[arg(long, env = "FPTC_CORESET", default_value_t = false)]
    pub coreset: bool,
    /// Also run the brute-force oracle and fill ratio_vs_oracle.
    #[arg(long, env = "FPTC_WITH_ORACLE", default_value_t = false)]
    pub with_oracle: bool,
    /// Write the solution JSON here instead of stdout.
    #[arg(long, env = "FPTC_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct OracleArgs {
    /// Instance file (JSON).
    #[arg(long, env = "FPTC_INPUT")]
    pub input: PathBuf,
    /// Problem variant to solve exactly.
    #[arg(long, env = "FPTC_VARIANT", value_enum, default_value_t = VariantArg::Auto)]
    pub variant: VariantArg,
    /// Uniform facility opening cost (fl variant; overrides the file).
    #[arg(long, env = "FPTC_OPEN_COST")]
    pub open_cost: Option<f64>,
    /// Cap on how many facilities the fl oracle may open.
    #[arg(long, env = "FPTC_MAX_OPEN")]
    pub max_open: Option<usize>,
    /// Write the solution JSON here instead of stdout.
    #[arg(long, env = "FPTC_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CoresetArgs {
    /// Instance file (JSON).
    #[arg(long, env = "FPTC_INPUT")]
    pub input: PathBuf,
    /// Target relative accuracy of the coreset.
    #[arg(long, env = "FPTC_EPSILON", default_value_t = 0.3)]
    pub epsilon: f64,
    /// Failure-probability knob.
    #[arg(long, env = "FPTC_DELTA", default_value_t = 0.1)]
    pub delta: f64,
    /// Leading constant of the sample-size formula.
    #[arg(long, env = "FPTC_MULTIPLIER", default_value_t = 20.0)]
    pub multiplier: f64,
    /// Sampling seed.
    #[arg(long, env = "FPTC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Write the client list JSON here instead of stdout.
    #[arg(long, env = "FPTC_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Instance file (JSON).
    #[arg(long, env = "FPTC_INPUT")]
    pub input: PathBuf,
    /// Approximation parameter the checks are run with.
    #[arg(long, env = "FPTC_EPSILON", default_value_t = 0.3)]
    pub epsilon: f64,
    /// Seed for the sampled guesses and selections.
    #[arg(long, env = "FPTC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Also write the report as JSON here.
    #[arg(long, env = "FPTC_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchVariantArg {
    Median,
    Means,
    /// Clients and facilities coincide; uses the subset-enumeration solver.
    Nonbipartite,
}

impl BenchVariantArg {
    pub fn as_str(self) -> &'static str {
        match self {
            BenchVariantArg::Median => "median",
            BenchVariantArg::Means => "means",
            BenchVariantArg::Nonbipartite => "nonbipartite",
        }
    }
}

#[derive(Args)]
pub struct BenchArgs {
    /// Number of seeded instances in the batch.
    #[arg(long, env = "FPTC_COUNT", default_value_t = 5)]
    pub count: usize,
    /// Points per generated instance.
    #[arg(long, env = "FPTC_N", default_value_t = 10)]
    pub n: usize,
    /// Centers per generated instance.
    #[arg(long, env = "FPTC_K", default_value_t = 2)]
    pub k: usize,
    /// Approximation parameter.
    #[arg(long, env = "FPTC_EPSILON", default_value_t = 0.3)]
    pub epsilon: f64,
    /// Problem variant benchmarked.
    #[arg(long, env = "FPTC_VARIANT", value_enum, default_value_t = BenchVariantArg::Median)]
    pub variant: BenchVariantArg,
    /// Inner submodular maximization engine.
    #[arg(long, env = "FPTC_MAXIMIZER", value_enum, default_value_t = MaximizerArg::Cg)]
    pub maximizer: MaximizerArg,
    /// Ceiling on the number of enumerated guesses.
    #[arg(long, env = "FPTC_BUDGET", default_value_t = 10_000_000)]
    pub budget: u64,
    /// Base seed; instance i uses seed + i.
    #[arg(long, env = "FPTC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Restart rounds for the randomized inner engine.
    #[arg(long, env = "FPTC_BOOST", default_value_t = 10)]
    pub boost: usize,
    /// Worker thread count (defaults to all cores).
    #[arg(long, env = "FPTC_THREADS")]
    pub threads: Option<usize>,
    /// Write the CSV here instead of stdout.
    #[arg(long, env = "FPTC_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct GenCommonArgs {
    /// Variables of the generated 3-CNF formula.
    #[arg(long, env = "FPTC_VARS", default_value_t = 3)]
    pub vars: usize,
    /// Clauses of the generated 3-CNF formula.
    #[arg(long, env = "FPTC_CLAUSES", default_value_t = 5)]
    pub clauses: usize,
    /// Generator seed.
    #[arg(long, env = "FPTC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Plant a satisfying assignment (the formula becomes satisfiable).
    #[arg(long, env = "FPTC_PLANTED", default_value_t = false)]
    pub planted: bool,
    /// Write the JSON here instead of stdout.
    #[arg(long, env = "FPTC_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct GenGameArgs {
    #[command(flatten)]
    pub common: GenCommonArgs,
    /// Merge left vertices into supervertices of this group size.
    #[arg(long, env = "FPTC_MERGE")]
    pub merge: Option<usize>,
    /// Apply this many rounds of parallel repetition.
    #[arg(long, env = "FPTC_REPEAT")]
    pub repeat: Option<usize>,
}

#[derive(Args)]
pub struct GenGridArgs {
    #[command(flatten)]
    pub game: GenGameArgs,
    /// Hypergrid dimension per right-vertex edge tuple.
    #[arg(long, env = "FPTC_A", default_value_t = 2)]
    pub a: usize,
}

#[derive(Subcommand)]
pub enum GenCommand {
    /// Random (optionally planted) 3-CNF formula.
    Sat3(GenCommonArgs),
    /// Clause-variable label-cover game, optionally merged and repeated.
    Labelcover(GenGameArgs),
    /// Materialized hypergrid coverage system over the game.
    Hypergrid(GenGridArgs),
    /// Coverage system embedded as a k-median instance.
    KmedianGadget(GenGridArgs),
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::GuessBudgetExceeded { .. } | Error::OracleBudgetExceeded(_) => 2,
        Error::VerifyTooLarge(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => run::cmd_solve(args),
        Command::Oracle(args) => run::cmd_oracle(args),
        Command::Coreset(args) => run::cmd_coreset(args),
        Command::Gen(args) => run::cmd_gen(args),
        Command::Verify(args) => run::cmd_verify(args),
        Command::Bench(args) => run::cmd_bench(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
