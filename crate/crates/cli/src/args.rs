//! Command-line arguments.
//!
//! The parsed arguments double as the request echo of every output document,
//! so they serialize to JSON alongside the result.

use std::path::PathBuf;

use clap::{ArgAction, ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Exact torus-equivariant Schubert classes of symplectic Grassmannians and
/// partial flag varieties.
#[derive(Parser, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[command(name = "schubpf", version)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Directory of the on-disk class cache.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Do not read or write the on-disk cache.
    #[arg(long, global = true)]
    #[serde(default)]
    pub no_cache: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Compute one class by one or more methods.
    Compute(ComputeArgs),
    /// Print the Pfaffian-sum table of a symplectic Grassmannian.
    Table(TableArgs),
    /// Compare Pfaffian sums with divided differences for every partition.
    Verify(VerifyArgs),
    /// Restrict a class to a torus-fixed point.
    Localize(LocalizeArgs),
    /// Expand one theta polynomial, e.g. `theta k=2 r=5 l=-3`.
    Theta(ThetaArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Sum over subsets of D(λ) of theta-polynomial Pfaffians.
    PfaffianSum,
    /// Divided differences applied to the class of the longest element.
    DividedDifference,
    /// Raising-operator expansion of the double theta polynomial.
    Raising,
    /// Block Pfaffian for partial flag varieties and pseudo-Grassmannian sums.
    Block,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::PfaffianSum => "pfaffian-sum",
            Method::DividedDifference => "divided-difference",
            Method::Raising => "raising",
            Method::Block => "block",
        }
    }
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputeArgs {
    /// Rank of the symplectic group.
    #[arg(long)]
    pub n: usize,

    /// Grassmannian index k (0 ≤ k < n).
    #[arg(long)]
    pub k: Option<usize>,

    /// Comma-separated k-strict partition, e.g. `5,3,2,1`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "w")]
    pub lambda: Option<String>,

    /// One-line signed permutation, e.g. `-1,-2,-3,-4` or `1,3|-5,-4,2`.
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,

    /// Parabolic index set, e.g. `0,2`.
    #[arg(long)]
    pub j: Option<String>,

    /// Method to use; repeat to compare methods.
    #[arg(long, value_enum)]
    #[serde(default)]
    pub method: Vec<Method>,

    /// Expand sums to polynomials (`--expand false` keeps only the formal sum).
    #[arg(long, num_args = 0..=1, default_value_t = true, default_missing_value = "true", action = ArgAction::Set)]
    pub expand: bool,

    /// Drop Pfaffian terms that evaluate to zero.
    #[arg(long)]
    #[serde(default)]
    pub prune_zero: bool,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableArgs {
    #[arg(long)]
    pub n: usize,

    #[arg(long)]
    pub k: usize,

    /// Evaluate against the built-in reference table and report each row.
    #[arg(long)]
    #[serde(default)]
    pub check: bool,

    /// Drop Pfaffian terms that evaluate to zero.
    #[arg(long)]
    #[serde(default)]
    pub prune_zero: bool,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,

    #[arg(long, required_unless_present = "all_k", conflicts_with = "all_k")]
    pub k: Option<usize>,

    /// Verify every k in 0..n.
    #[arg(long)]
    #[serde(default)]
    pub all_k: bool,

    /// Largest rank accepted; n = 5 runs take minutes.
    #[arg(long, default_value_t = schubpf::schubert::DEFAULT_VERIFY_MAX_N)]
    pub max_n: usize,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[command(group(ArgGroup::new("source").required(true)))]
pub struct LocalizeArgs {
    #[arg(long)]
    pub n: usize,

    #[arg(long)]
    pub k: usize,

    /// The fixed point, as a k-strict partition.
    #[arg(long)]
    pub mu: String,

    /// Localize the Pfaffian sum of this partition.
    #[arg(long, allow_hyphen_values = true, group = "source")]
    pub lambda: Option<String>,

    /// Localize the divided-difference class of this signed permutation.
    #[arg(long, allow_hyphen_values = true, group = "source")]
    pub w: Option<String>,

    /// Localize a polynomial given in text form, e.g. `Q[1] + z1 - t1`.
    #[arg(long, allow_hyphen_values = true, group = "source")]
    pub poly: Option<String>,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaArgs {
    /// Fields `k=.. r=.. l=..`.
    #[arg(required = true, num_args = 1..)]
    pub spec: Vec<String>,
}
