use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const FAMILY_HELP: &str = "\
Family ids:
  proposed:  four-r-1 four-r-2 four-r-3 four-r-plus-1-1 four-r-plus-1-2 four-r-plus-1-3
             four-r-plus-1-4 four-r-plus-1-5 four-r-plus-3-1 four-r-plus-3-2
  reference: ula wichmann bracewell na ina sna ana-i2 misc type93-4r3 type93-4r1
             type93-4r type10-4r3 type10-4r1a type10-4r1b type10-4r";

#[derive(Debug, Parser)]
#[command(
    name = "coarray",
    version,
    about = "Sparse linear array design, co-array analysis and DOA benchmarks"
)]
#[command(after_help = FAMILY_HELP)]
pub struct Cli {
    /// Cap on worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate sensor positions for a family at a given sensor count.
    #[command(after_help = FAMILY_HELP)]
    Generate {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Difference co-array metrics, small-lag weights and coupling leakage.
    Analyze {
        #[command(flatten)]
        array: ArraySource,
        /// Emit the full weight function `lag,weight` instead of the summary.
        #[arg(long)]
        weights: bool,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// One summary row per family at a common sensor count.
    Compare {
        #[arg(long)]
        n: usize,
        /// `all`, or a comma-separated list of family ids (default: the six
        /// DOA comparison arrays).
        #[arg(long)]
        families: Option<String>,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Mutual coupling matrix magnitudes.
    CouplingMatrix {
        #[command(flatten)]
        array: ArraySource,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Co-array MUSIC pseudo-spectrum and peak estimates for one data record.
    Spectrum {
        /// Scenario JSON file; replaces all inline scenario flags.
        #[arg(long, conflicts_with_all = ["family", "positions", "k", "snr", "snapshots", "seed", "coupling", "grid"])]
        scenario: Option<PathBuf>,
        #[command(flatten)]
        array: OptionalArraySource,
        /// Number of sources, placed uniformly on [-0.45, 0.45].
        #[arg(long, default_value_t = 35)]
        k: usize,
        /// SNR in dB.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        snr: f64,
        #[arg(long, default_value_t = 1000)]
        snapshots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Switch::On)]
        coupling: Switch,
        #[arg(long, default_value_t = 10_001)]
        grid: usize,
        /// Also write rank-paired estimates as CSV to this path.
        #[arg(long)]
        peaks: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte-Carlo RMSE sweep over one scenario axis.
    Rmse {
        /// Sweep JSON file; replaces all inline sweep flags.
        #[arg(long, conflicts_with_all = ["axis", "values", "families", "n", "trials", "seed", "k", "snr", "snapshots", "coupling"])]
        spec: Option<PathBuf>,
        #[arg(long, value_enum, required_unless_present = "spec")]
        axis: Option<AxisArg>,
        /// Comma-separated, strictly increasing axis values.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required_unless_present = "spec"
        )]
        values: Vec<f64>,
        /// `all`, or a comma-separated list of family ids (default: the six
        /// DOA comparison arrays).
        #[arg(long)]
        families: Option<String>,
        #[arg(long, default_value_t = 23)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 35)]
        k: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        snr: f64,
        #[arg(long, default_value_t = 1000)]
        snapshots: usize,
        #[arg(long, value_enum, default_value_t = Switch::On)]
        coupling: Switch,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exhaustive minimum-redundancy array search.
    SearchMra {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 127)]
        max_aperture: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check closed-form aperture, uDOF, weights and redundancy of every
    /// proposed family over a range of sensor counts.
    Verify {
        #[arg(long, default_value_t = 18)]
        n_min: usize,
        #[arg(long, default_value_t = 60)]
        n_max: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = true)]
pub struct ArraySource {
    #[arg(long, requires = "n", conflicts_with = "positions")]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Array file, JSON or whitespace-separated positions.
    #[arg(long)]
    pub positions: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptionalArraySource {
    /// Array family (default: four-r-1).
    #[arg(long, conflicts_with = "positions")]
    pub family: Option<String>,
    #[arg(long, default_value_t = 23)]
    pub n: usize,
    /// Array file, JSON or whitespace-separated positions.
    #[arg(long)]
    pub positions: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CouplingArgs {
    #[arg(long, default_value_t = 0.3)]
    pub c1_mag: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_3, allow_negative_numbers = true)]
    pub c1_phase: f64,
    #[arg(long, default_value_t = 100)]
    pub band: usize,
    #[arg(long, default_value_t = std::f64::consts::PI / 8.0, allow_negative_numbers = true)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format; `text` applies to `generate` only.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    #[value(name = "snr_db", alias = "snr")]
    SnrDb,
    Snapshots,
    #[value(name = "c1_magnitude", alias = "c1")]
    C1Magnitude,
    #[value(name = "source_count", alias = "k")]
    SourceCount,
}
