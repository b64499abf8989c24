use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "moreau", version, about = "Moreau envelopes of convex piecewise cubics and smoothed 2D gauges")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a function spec describes a convex piecewise cubic
    Validate(InputArg),
    /// Proximal point, envelope and gradient at one prox-centre
    Eval {
        #[command(flatten)]
        input: InputArg,
        /// Prox-parameter r > 0
        #[arg(long)]
        r: f64,
        /// Prox-centre
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
    },
    /// Cells of the prox-centre axis with their closed forms
    Partition {
        #[command(flatten)]
        input: InputArg,
        /// Prox-parameter r > 0
        #[arg(long)]
        r: f64,
    },
    /// Compare the closed forms with the bisection oracle at random prox-centres
    Compare {
        #[command(flatten)]
        input: InputArg,
        /// Prox-parameters, repeated or comma-separated
        #[arg(long, value_delimiter = ',', default_value = "1")]
        r: Vec<f64>,
        /// Random prox-centres per r
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample f and its envelopes for plotting
    Plot {
        #[command(flatten)]
        input: InputArg,
        /// Prox-parameters, repeated or comma-separated
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<f64>,
        /// Sampled interval LO:HI
        #[arg(long, allow_hyphen_values = true)]
        range: Span,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Smoothed gauge on a grid, or its unit circle
    Gauge(GaugeArgs),
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// JSON function spec
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write here instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GaugeArgs {
    #[arg(long, value_enum)]
    pub kind: GaugeKind,
    /// Smoothing parameters, repeated or comma-separated
    #[arg(long, value_delimiter = ',', required = true)]
    pub r: Vec<f64>,
    /// Grid mode: LO:HI:N samples per axis
    #[arg(long, allow_hyphen_values = true, conflicts_with = "samples")]
    pub grid: Option<GridSpec>,
    /// Circle mode: number of rays
    #[arg(long)]
    pub samples: Option<usize>,
    /// Exponent of the custom weighted l_p gauge
    #[arg(long, default_value_t = 2.0)]
    pub norm_p: f64,
    /// Weights of the custom gauge `(|w1 x|^p + |w2 y|^p)^(1/p)`
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 1.0])]
    pub weights: Vec<f64>,
    /// Scale of the Euclidean gauge
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GaugeKind {
    Max,
    L1,
    Euclid,
    Custom,
}

/// `LO:HI` with `LO < HI`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
        let lo: f64 = lo.trim().parse().map_err(|e| format!("LO: {e}"))?;
        let hi: f64 = hi.trim().parse().map_err(|e| format!("HI: {e}"))?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(format!("need finite LO < HI, got {lo}:{hi}"));
        }
        Ok(Self { lo, hi })
    }
}

/// `LO:HI:N` with `N >= 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub span: Span,
    pub n: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (span, n) = s.rsplit_once(':').ok_or("expected LO:HI:N")?;
        let n: usize = n.trim().parse().map_err(|e| format!("N: {e}"))?;
        if n < 2 {
            return Err(format!("need N >= 2, got {n}"));
        }
        Ok(Self { span: span.parse()?, n })
    }
}
