//! `nosol`: build, search and verify solution-free digit sets.

mod commands;
mod io;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nosol_core::Error;

#[derive(Debug, Parser, Serialize)]
#[command(name = "nosol", version, about = "Solution-free sets for invariant linear equations")]
pub struct Cli {
    /// Node budget for every exhaustive search in this run.
    #[arg(long, global = true, env = "NOSOL_BUDGET", default_value_t = nosol_core::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Where to write the run manifest (defaults next to the first certificate).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Check a set for non-trivial solutions.
    Verify(VerifyArgs),
    /// Build a certificate from a closed-form recipe.
    Construct(ConstructArgs),
    /// Search digit sets over a grid of bases.
    Search(SearchArgs),
    /// Count bad coefficient tuples.
    Sweep(SweepArgs),
    /// Optimal alpha for the four-variable family.
    Alpha(AlphaArgs),
    /// Compare a certificate's rate with its recipe's guarantee.
    Rate(RateArgs),
}

#[derive(Debug, Args, Serialize)]
#[group(id = "equation_spec", multiple = false)]
pub struct EquationSpec {
    /// Generators of a symmetric equation, e.g. `1,2`.
    #[arg(long, allow_hyphen_values = true)]
    pub sym: Option<String>,
    /// Raw coefficients, e.g. `2,2,-3,-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub eq: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyArg {
    Auto,
    Dfs,
    Mitm,
    Naive,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub equation: EquationSpec,
    /// Inline set, e.g. `0,1,4,5`.
    #[arg(long, allow_hyphen_values = true, group = "source")]
    pub set: Option<String>,
    /// File with one integer per line.
    #[arg(long, group = "source")]
    pub set_file: Option<PathBuf>,
    /// Certificate JSON; supplies equation and digits.
    #[arg(long, group = "source", conflicts_with_all = ["sym", "eq"])]
    pub cert: Option<PathBuf>,
    /// Only count solutions with pairwise distinct values.
    #[arg(long)]
    pub distinct: bool,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    pub strategy: StrategyArg,
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct OutputArgs {
    /// Lift to `[1, N]`.
    #[arg(long = "N", global = true)]
    pub n: Option<u64>,
    /// Certificate path (printed inline when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Lifted set, one integer per line (needs `--N`).
    #[arg(long, global = true, requires = "n")]
    pub lifted_out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructArgs {
    #[command(subcommand)]
    pub recipe: Recipe,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Recipe {
    /// Digits `{0..m-1}` for generators `1, m, ..., m^(k-1)`.
    Geometric {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        k: u32,
    },
    /// Two generators `a < b`.
    TwoVar {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
    },
    /// Generators `a^i b^(k-1-i)`.
    CoprimePower {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        k: u32,
    },
    /// Generators spaced by at least `s`.
    Spaced {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        s: u64,
    },
    /// Three generators `a < b < c`.
    Thm3 {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        c: i64,
        #[arg(long, default_value_t = 0.3)]
        alpha: f64,
        /// Use the original (astronomical) largeness threshold.
        #[arg(long)]
        literal: bool,
    },
    /// Two-block six-variable equation with 3AP-free digits.
    Section5 {
        #[arg(long)]
        d: i64,
    },
    /// Generators `(m, 2m-2, 3m-3)`, distinct-variable solutions only.
    DistinctVar {
        #[arg(long)]
        m: u64,
    },
    /// Shift a symmetric certificate's coefficients by multiples of its base.
    Shift {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        i: String,
        #[arg(long, allow_hyphen_values = true)]
        j: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridArg {
    Auto,
    Extended,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    #[command(flatten)]
    pub equation: EquationSpec,
    /// Explicit bases, e.g. `40` or `40,80`.
    #[arg(long = "L", group = "grid")]
    pub l: Option<String>,
    #[arg(long = "L-grid", value_enum, group = "grid")]
    pub l_grid: Option<GridArg>,
    /// Branch-and-bound to completion (default).
    #[arg(long, group = "search_mode")]
    pub exact: bool,
    /// Greedy incumbent, then branch-and-bound within the budget.
    #[arg(long, group = "search_mode")]
    pub anytime: bool,
    /// Greedy only.
    #[arg(long, group = "search_mode")]
    pub greedy: bool,
    /// Seek sets where one generator pair is forced equal (distinct-variable, liftable).
    #[arg(long)]
    pub distinct: bool,
    /// Split branch-and-bound over threads; the result is unchanged.
    #[arg(long)]
    pub parallel: bool,
    /// Stream NDJSON progress events to stderr.
    #[arg(long)]
    pub progress: bool,
    /// Certificate for the best row.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long = "C")]
    pub c: u64,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, conflicts_with = "samples")]
    pub exhaustive: bool,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct AlphaArgs {
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.499)]
    pub q: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct RateArgs {
    #[arg(long)]
    pub cert: PathBuf,
}

pub mod exit {
    pub const CLEAN: i32 = 0;
    pub const WITNESS: i32 = 1;
    pub const BUDGET: i32 = 2;
    pub const BEST_EFFORT: i32 = 3;
    pub const MALFORMED: i32 = 64;
    pub const PRECONDITION: i32 = 65;
    pub const INTERNAL: i32 = 70;
}

fn exit_code(err: &anyhow::Error) -> i32 {
    if err.chain().any(|e| e.is::<io::Malformed>()) {
        return exit::MALFORMED;
    }
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::BudgetExhausted { .. }) => exit::BUDGET,
        Some(
            Error::Parse(_)
            | Error::InvalidSet(_)
            | Error::ArityMismatch { .. }
            | Error::EmptyEquation
            | Error::NotInvariant(_)
            | Error::NotASolution,
        ) => exit::MALFORMED,
        Some(_) => exit::PRECONDITION,
        None => exit::INTERNAL,
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => exit::MALFORMED,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    };
    std::process::exit(code);
}
