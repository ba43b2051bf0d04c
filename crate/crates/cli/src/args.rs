use std::path::PathBuf;

use bchdual_core::LambdaKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "bchdual", version, about = "BCH codes of length (q^m-1)/lambda and their duals")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = "BCHDUAL_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// q-cyclotomic cosets modulo n and their largest leaders.
    Cosets(CosetsArgs),
    /// Lower bounds on the minimum distance of the dual of C_delta.
    DualBound(DualBoundArgs),
    /// Dually-BCH verdicts over a range of designed distances.
    DuallyBch(DuallyBchArgs),
    /// Re-runs the built-in reference examples and the lemma grids.
    VerifyPaper(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Field size (a prime power).
    #[arg(long)]
    pub q: u64,

    /// Extension degree.
    #[arg(long)]
    pub m: u32,

    /// Length divisor lambda, a divisor of q-1. Defaults to 1.
    #[arg(long, conflicts_with = "s")]
    pub lambda: Option<u64>,

    /// Power-form divisor lambda = q^s - 1, with s dividing m.
    #[arg(long)]
    pub s: Option<u32>,
}

impl FamilyArgs {
    pub fn lambda_kind(&self) -> LambdaKind {
        match (self.lambda, self.s) {
            (_, Some(s)) => LambdaKind::PowerForm(s),
            (l, None) => LambdaKind::DivisorOfQMinus1(l.unwrap_or(1)),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CosetsArgs {
    /// Base of the cosets.
    #[arg(long)]
    pub q: u64,

    /// Modulus given directly instead of through (m, lambda).
    #[arg(long, conflicts_with_all = ["m", "lambda", "s"], required_unless_present = "m")]
    pub n: Option<u64>,

    #[arg(long)]
    pub m: Option<u32>,

    #[arg(long, conflicts_with = "s")]
    pub lambda: Option<u64>,

    #[arg(long)]
    pub s: Option<u32>,

    /// Number of largest leaders to list.
    #[arg(long, default_value_t = 3)]
    pub top: usize,

    /// Show the closed-form leader formulas next to the computed leaders.
    #[arg(long)]
    pub closed_form: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Largest number of codewords enumerated before switching to random search.
    #[arg(long, default_value_t = bchdual_core::mindist::DEFAULT_BUDGET)]
    pub budget: u64,

    /// Information-set trials when enumeration is over budget.
    #[arg(long, default_value_t = bchdual_core::mindist::DEFAULT_TRIALS)]
    pub trials: u64,

    #[arg(long, default_value_t = bchdual_core::mindist::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct DualBoundArgs {
    #[command(flatten)]
    pub family: FamilyArgs,

    /// Designed distance.
    #[arg(long)]
    pub delta: u64,

    /// Also bracket or determine the true dual distance.
    #[arg(long)]
    pub certify: bool,

    /// Report direct computations only when no closed form applies.
    #[arg(long)]
    pub force_direct: bool,

    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DuallyBchArgs {
    #[command(flatten)]
    pub family: FamilyArgs,

    /// Inclusive range A:B of designed distances. Defaults to 2:n.
    #[arg(long, value_parser = parse_range)]
    pub delta_range: Option<(u64, u64)>,

    /// Report direct verdicts only when no closed-form criterion applies.
    #[arg(long)]
    pub force_direct: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Restrict to one group (leaders, bounds, dually, distance, props) or one lemma id.
    #[arg(long)]
    pub only: Option<String>,

    /// Grid manifest for the lemma checks; defaults to the built-in grid.
    #[arg(long)]
    pub grid: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected A:B, got {s:?}"))?;
    let a: u64 = a.trim().parse().map_err(|e| format!("bad range start {a:?}: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("bad range end {b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}
