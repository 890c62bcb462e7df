use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ghostdim",
    version,
    about = "Missing-digit fractals, automatic sequences and ghost measures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Base q (at least 2)
    #[arg(long)]
    pub q: u32,
    /// Comma-separated digit set A; must contain 0
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub digits: Vec<i64>,
    /// Largest number of sequence symbols any single step may materialize
    #[arg(long, default_value_t = 100_000_000)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (default: standard output)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Omit the metadata block (config echo and timestamp)
    #[arg(long)]
    pub no_meta: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension, substitution and Mahler data of a digit set
    Analyze(Common),
    /// Print the prefix ρ^k(1) of the automatic sequence
    Sequence {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: u32,
        /// Generate from base-q digits instead of iterating the substitution
        #[arg(long)]
        oracle: bool,
    },
    /// Fourier–Stieltjes coefficients by several routes
    Fourier {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        k: u32,
        #[arg(long, default_value_t = -50, allow_hyphen_values = true)]
        n_min: i64,
        #[arg(long, default_value_t = 50, allow_hyphen_values = true)]
        n_max: i64,
        /// Truncation depth of the limit route (default: ceil(log_q |n|) + 40)
        #[arg(long = "L")]
        depth: Option<u32>,
        /// Routes to evaluate: direct, product, level, limit
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "direct,product,level,limit"
        )]
        routes: Vec<String>,
    },
    /// Distribution function of the level-k measure on a uniform grid
    Staircase {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 6)]
        k: u32,
        /// Number of grid points, x_i = i/(grid-1)
        #[arg(long, default_value_t = 729)]
        grid: usize,
        /// Also write the staircase as an SVG polyline
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Sample G = (1-z)^{log_q m} M(z) along z = 1 - q^{-t}
    Probe {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10.0)]
        t_min: f64,
        #[arg(long, default_value_t = 30.0)]
        t_max: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
    },
    /// Run a built-in verification suite over a family of digit sets
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Largest level k used by the oracle, fourier and cdf suites
        #[arg(long)]
        k_max: Option<u32>,
        /// Frequencies |n| <= n_max in the fourier suite
        #[arg(long, default_value_t = 500)]
        n_max: i64,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Dimension,
    Fourier,
    Cdf,
    Oracle,
    Asymptotic,
    All,
}
