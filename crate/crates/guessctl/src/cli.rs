use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use guesswork::{LetterDistribution, SourceKind};

/// Probabilities are renormalised when they sum to within this of 1.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "guessctl",
    version,
    about = "Guesswork exponents, figures and exact comparisons"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Letter probabilities, comma separated
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub p: Option<String>,

    /// Half-width of the typical window
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,

    /// Output format (json for analyze, csv otherwise)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Refuse to enumerate more k-types than this
    #[arg(long, global = true, default_value_t = guesswork::entropy::DEFAULT_MAX_TYPES)]
    pub max_types: u128,

    /// Refuse word-by-word enumeration beyond this many words
    #[arg(long, global = true, default_value_t = guesswork::oracle::DEFAULT_MAX_WORDS)]
    pub max_words: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    #[value(alias = "w")]
    Unconditioned,
    #[value(alias = "we")]
    Conditioned,
    #[value(name = "uniform-typical", alias = "u")]
    UniformTypical,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exponent report for all three sources
    Analyze,
    /// Growth-rate differences against p0 for a binary source
    Fig1 {
        /// start:stop:step or a comma-separated list
        #[arg(long, default_value = "0.525:0.975:0.025")]
        p0_grid: String,
    },
    /// -x - rate(x) curves on [0, log m]
    Fig2 {
        #[arg(long, default_value_t = 400)]
        x_points: usize,
    },
    /// Exact finite-k values against their asymptotic limits
    ExactCompare {
        #[arg(long, value_enum, default_value = "unconditioned")]
        kind: KindArg,
        /// Word lengths, comma separated
        #[arg(long, default_value = "4,8,16")]
        k: String,
        /// Moment orders, comma separated
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        alpha: String,
        /// Also check moments against word-by-word enumeration
        #[arg(long)]
        crosscheck: bool,
    },
    /// Typical-set size and probability at each k
    Census {
        #[arg(long, default_value = "10")]
        k: String,
    },
}

pub fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    let items = raw
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .with_context(|| format!("invalid {what} value {s:?}"))
        })
        .collect::<Result<Vec<T>>>()?;
    if items.is_empty() {
        bail!("{what} list is empty");
    }
    Ok(items)
}

pub fn parse_distribution(raw: Option<&str>) -> Result<LetterDistribution> {
    let raw = raw.context("--p is required for this command")?;
    let values = parse_list::<f64>(raw, "probability")?;
    Ok(LetterDistribution::normalized(
        values,
        RENORMALIZE_TOLERANCE,
    )?)
}

/// `start:stop:step` (inclusive) or an explicit list.
pub fn parse_grid(raw: &str) -> Result<Vec<f64>> {
    if !raw.contains(':') {
        return parse_list(raw, "grid");
    }
    let parts = parse_list_sep(raw)?;
    let [start, stop, step] = parts[..] else {
        bail!("grid {raw:?} must be start:stop:step");
    };
    let ordered = step > 0.0 && stop >= start;
    if !ordered {
        bail!("grid {raw:?} needs step > 0 and stop >= start");
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

fn parse_list_sep(raw: &str) -> Result<Vec<f64>> {
    raw.split(':')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("invalid grid value {s:?}"))
        })
        .collect()
}

pub fn require_epsilon(epsilon: Option<f64>) -> Result<f64> {
    epsilon.context("--epsilon is required for this command")
}

pub fn source_kind(
    kind: KindArg,
    p: LetterDistribution,
    epsilon: Option<f64>,
) -> Result<SourceKind> {
    Ok(match kind {
        KindArg::Unconditioned => SourceKind::unconditioned(p),
        KindArg::Conditioned => SourceKind::conditioned(p, require_epsilon(epsilon)?)?,
        KindArg::UniformTypical => SourceKind::uniform_typical(p, require_epsilon(epsilon)?)?,
    })
}
