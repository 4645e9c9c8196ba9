//! Command-line arguments and their validation into a [`RunConfig`].

use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loggap::{LogBase64, Result};

#[derive(Debug, Parser)]
#[command(name = "loggap", version, about = "Gap statistics of {log_b n}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scaled gaps of the first N terms: empirical CDF and histogram.
    Empirical(EmpiricalArgs),
    /// Limit law sampled on a grid, with its atoms.
    Theory(TheoryArgs),
    /// Empirical gaps against the limit law; exits 2 when a threshold is breached.
    Compare(CompareArgs),
    /// Superposition of progressions: Monte Carlo, enumeration, or the `E^(b)` family.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    /// Gaps of `{log_b n}`, law `P(s)`.
    Raw,
    /// Gaps after unfolding, law `P̃(s)`.
    Rescaled,
}

impl What {
    pub fn name(self) -> &'static str {
        match self {
            What::Raw => "raw",
            What::Rescaled => "rescaled",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults to csv, or json for `compare`.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Seed recorded in the header and used by randomised commands.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BaseArgs {
    /// `e`, `pi`, a decimal, `exp:<x>` for e^x, `int:<b>` or `root:<m>:<r>`.
    #[arg(long)]
    pub base: String,
    /// Truncation tolerance of the infinite Pochhammer symbol.
    #[arg(long, default_value_t = 1e-12)]
    pub eps: f64,
}

#[derive(Debug, Clone, Args)]
pub struct EmpiricalArgs {
    #[command(flatten)]
    pub base: BaseArgs,
    #[arg(long = "n", default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "raw")]
    pub what: What,
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    #[arg(long = "s-max")]
    pub s_max: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct TheoryArgs {
    #[command(flatten)]
    pub base: BaseArgs,
    #[arg(long, value_enum, default_value = "raw")]
    pub what: What,
    /// Number of uniform grid points before refinement near the jumps.
    #[arg(long, default_value_t = 400)]
    pub bins: usize,
    #[arg(long = "s-max")]
    pub s_max: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub base: BaseArgs,
    #[arg(long = "n", default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "raw")]
    pub what: What,
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    #[arg(long = "s-max")]
    pub s_max: Option<f64>,
    /// Largest accepted sup-CDF distance away from the atoms.
    #[arg(long, default_value_t = 0.03)]
    pub threshold: f64,
    /// Largest accepted atom mass error.
    #[arg(long = "atom-threshold", default_value_t = 0.02)]
    pub atom_threshold: f64,
    /// Add the wall-clock time to the report (makes the output non-reproducible).
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Comma-separated frequencies.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub omegas: Vec<f64>,
    /// Comma-separated phases, or `random` to draw them from the seed.
    #[arg(long)]
    pub betas: Option<String>,
    /// Comma-separated window lengths.
    #[arg(long = "L", value_delimiter = ',', default_value = "0.5")]
    pub lengths: Vec<f64>,
    /// Count range `a..b` (inclusive).
    #[arg(long = "k", default_value = "0..3")]
    pub k: String,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Horizon: window centres are uniform in `[0, T]`.
    #[arg(long = "T", default_value_t = 1e4)]
    pub horizon: f64,
    /// Enumerate the gaps of the merged progressions in `lo:hi`.
    #[arg(long)]
    pub enumerate: Option<String>,
    /// Evaluate `E^(b)(k, L)` against the Poisson law instead of simulating.
    #[arg(long = "family-b")]
    pub family_b: Option<f64>,
    /// Initial truncation of the family (doubled until converged).
    #[arg(long = "j")]
    pub terms: Option<usize>,
    /// Number of CCDF points in enumeration mode.
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
    #[command(flatten)]
    pub common: Common,
}

/// A validated base with the text it was parsed from.
#[derive(Debug, Clone)]
pub struct BaseSpec {
    pub text: String,
    pub base: LogBase64,
}

pub fn parse_base(text: &str) -> std::result::Result<BaseSpec, String> {
    let base = parse_base_inner(text.trim()).map_err(|e| format!("invalid base `{text}`: {e}"))?;
    Ok(BaseSpec { text: text.trim().to_string(), base })
}

fn parse_base_inner(text: &str) -> std::result::Result<LogBase64, String> {
    let lib = |r: Result<LogBase64>| r.map_err(|e| e.to_string());
    let num = |s: &str| s.parse::<f64>().map_err(|_| format!("`{s}` is not a number"));
    let int = |s: &str| s.parse::<u64>().map_err(|_| format!("`{s}` is not a non-negative integer"));
    match text.split(':').collect::<Vec<_>>().as_slice() {
        ["e"] => lib(LogBase64::transcendental(std::f64::consts::E)),
        ["pi"] => lib(LogBase64::transcendental(std::f64::consts::PI)),
        ["exp", x] => lib(LogBase64::transcendental(num(x)?.exp())),
        ["int", b] => lib(LogBase64::integer(int(b)?)),
        ["root", m, r] => {
            let r = r.parse::<u32>().map_err(|_| format!("`{r}` is not a valid root order"))?;
            lib(LogBase64::integer_root(int(m)?, r))
        }
        [x] => lib(LogBase64::transcendental(num(x)?)),
        _ => Err("expected e, pi, <decimal>, exp:<x>, int:<b> or root:<m>:<r>".into()),
    }
}

pub fn parse_k_range(text: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let err = || format!("invalid count range `{text}`, expected a..b");
    let (a, b) = text.split_once("..").ok_or_else(err)?;
    let a: usize = a.trim().parse().map_err(|_| err())?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| err())?;
    if a > b {
        return Err(err());
    }
    Ok(a..=b)
}

pub fn parse_interval(text: &str) -> std::result::Result<(f64, f64), String> {
    let err = || format!("invalid interval `{text}`, expected lo:hi with lo < hi");
    let (a, b) = text.split_once(':').ok_or_else(err)?;
    let a: f64 = a.trim().parse().map_err(|_| err())?;
    let b: f64 = b.trim().parse().map_err(|_| err())?;
    if !(a < b) {
        return Err(err());
    }
    Ok((a, b))
}

/// Flattened, validated configuration echoed into every output header.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub entries: Vec<(&'static str, String)>,
}

impl RunConfig {
    pub fn push(&mut self, key: &'static str, value: impl ToString) {
        self.entries.push((key, value.to_string()));
    }
}
