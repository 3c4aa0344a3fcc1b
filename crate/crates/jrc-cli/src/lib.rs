//! `jrc` — command-line front end for the jrc-core library.
//!
//! Computes, samples, and cross-validates the communication-channel
//! distributions and capacities of a JRC-capable coherent MIMO radar, and
//! writes every result as self-describing CSV/JSON files:
//!
//! - `jrc waveform` — draw phase-coding matrices and their per-sub-pulse
//!   amplitudes (the unintentional modulation the channel model rides on);
//! - `jrc pdf` — analytic channel densities (truncated modulation, product
//!   channel, phase Fourier expansion), optionally cross-checked against
//!   seeded Monte Carlo samples;
//! - `jrc capacity` — capacity sweeps for the AWGN/fast/slow regimes, the
//!   Table 2 difference table, and outage-probability scans;
//! - `jrc validate` — the acceptance suite (ten criteria), with report files.
//!
//! Parameter precedence is flags > config file (`--config run.toml`) >
//! defaults; the master seed falls back to the `JRC_SEED` environment
//! variable and finally 12345. Every command is deterministic given its
//! seed: rerunning writes byte-identical files apart from the timestamp
//! header line, which `--no-timestamp` suppresses.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod output;
pub mod parse;

use config::FileConfig;
use output::OutputCtx;

/// Fallback master seed when neither `--seed`, the config file, nor
/// `JRC_SEED` provides one.
pub const DEFAULT_SEED: u64 = 12345;

#[derive(Parser, Debug)]
#[command(
    name = "jrc",
    version,
    about = "Waveforms, channel distributions, and capacities of a JRC-capable coherent MIMO radar"
)]
pub struct Cli {
    /// TOML config file; command-line flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Directory output files are written into (default: current directory).
    #[arg(long, global = true, value_name = "DIR")]
    pub output: Option<PathBuf>,
    /// Master seed (default: config file seed, then $JRC_SEED, then 12345).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Suppress the timestamp header line for byte-identical reruns.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Report capacities and rates in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate phase-coding matrices; writes phase_matrix.json,
    /// amplitudes.csv, iterations.csv.
    Waveform(WaveformArgs),
    /// Analytic channel densities; writes pdf_curve.csv (plus histogram and
    /// goodness-of-fit report with --validate).
    Pdf(PdfArgs),
    /// Capacity sweeps, Table 2 differences, outage scans.
    Capacity(CapacityArgs),
    /// Run the acceptance suite; writes acceptance_report.txt and
    /// acceptance_results.json.
    Validate(ValidateArgs),
}

#[derive(Args, Debug, Default)]
pub struct WaveformArgs {
    /// Antenna count M (default 16).
    #[arg(long)]
    pub m: Option<usize>,
    /// Sub-pulses per pulse L (default 256).
    #[arg(long)]
    pub l: Option<usize>,
    /// Element spacing in wavelengths (default 0.5).
    #[arg(long)]
    pub d: Option<f64>,
    /// Carrier frequency in Hz (metadata only; default 10e9).
    #[arg(long)]
    pub f_c: Option<f64>,
    /// Communication direction: `-22deg` or radians. Paired with --theta-n.
    #[arg(long, allow_hyphen_values = true)]
    pub theta_c: Option<String>,
    /// Null direction: `38deg` or radians. Paired with --theta-c.
    #[arg(long, allow_hyphen_values = true)]
    pub theta_n: Option<String>,
    /// Amplitude constraint: none | single | double (default none).
    #[arg(long)]
    pub constraint: Option<String>,
    /// Exceedance probability p0 defining the threshold A0 (default 0.1).
    #[arg(long)]
    pub p0: Option<f64>,
    /// Double-side window half-width in dB (default 3).
    #[arg(long)]
    pub delta_db: Option<f64>,
    /// Generation method: null-fixed | comm-fixed (default null-fixed).
    #[arg(long)]
    pub method: Option<String>,
    /// Number of pulses to generate (default 1).
    #[arg(long)]
    pub pulses: Option<usize>,
    /// Rejection budget per sub-pulse (default 1000000).
    #[arg(long)]
    pub max_iterations: Option<u64>,
}

#[derive(Args, Debug, Default)]
pub struct PdfArgs {
    /// Antenna count M (default 16).
    #[arg(long)]
    pub m: Option<usize>,
    /// Truncation window: none | single | double (default none).
    #[arg(long)]
    pub window: Option<String>,
    /// Exceedance probability p0 (default 0.1).
    #[arg(long)]
    pub p0: Option<f64>,
    /// Double-side window half-width in dB (default 3).
    #[arg(long)]
    pub delta_db: Option<f64>,
    /// Truncated-modulation density alone (no fading).
    #[arg(long)]
    pub modulation_only: bool,
    /// Fading model for the product channel: rayleigh | rician.
    #[arg(long)]
    pub fading: Option<String>,
    /// Fading std deviation σ_H (default 1.0; exclusive with --sigma-h2).
    #[arg(long)]
    pub sigma_h: Option<f64>,
    /// Fading variance σ_H² (exclusive with --sigma-h).
    #[arg(long)]
    pub sigma_h2: Option<f64>,
    /// Rician K factor (required with --fading rician).
    #[arg(long)]
    pub k: Option<f64>,
    /// Density domain: amplitude | snr (default amplitude).
    #[arg(long)]
    pub domain: Option<String>,
    /// Reference SNR c_γ (required for --domain snr).
    #[arg(long)]
    pub c_gamma: Option<f64>,
    /// Curve resolution (default 4001; 16001 for --domain snr).
    #[arg(long)]
    pub points: Option<usize>,
    /// Phase-coding matrix JSON: emit its Fourier phase density instead.
    #[arg(long, value_name = "FILE")]
    pub phase_matrix: Option<PathBuf>,
    /// Fourier terms for the phase density (default 16).
    #[arg(long)]
    pub fourier_terms: Option<usize>,
    /// Cross-validate the curve against seeded Monte Carlo samples.
    #[arg(long)]
    pub validate: bool,
    /// Monte Carlo sample count for --validate (default 1000000).
    #[arg(long)]
    pub samples: Option<usize>,
    /// KS-statistic pass threshold for --validate (default 0.02).
    #[arg(long)]
    pub ks_threshold: Option<f64>,
}

#[derive(Args, Debug, Default)]
pub struct CapacityArgs {
    /// Channel regime: awgn | fast | slow (default awgn).
    #[arg(long)]
    pub regime: Option<String>,
    /// Antenna count M (default 16).
    #[arg(long)]
    pub m: Option<usize>,
    /// Exceedance probability p0 (default 0.1).
    #[arg(long)]
    pub p0: Option<f64>,
    /// Double-side window half-width in dB (default 3).
    #[arg(long)]
    pub delta_db: Option<f64>,
    /// SNR grid in dB: `10` or `lo:hi:step` (default -10:30:1).
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<String>,
    /// AWGN methods: `all` or a comma list of stable, single_side,
    /// delta_<w>db, no_constraint, rayleigh_csi (default all).
    #[arg(long)]
    pub methods: Option<String>,
    /// Truncation window for fast/slow regimes: none | single | double
    /// (default none).
    #[arg(long)]
    pub window: Option<String>,
    /// Fading model for fast/slow regimes: rayleigh | rician.
    #[arg(long)]
    pub fading: Option<String>,
    /// Fading std deviation σ_H (exclusive with --sigma-h2).
    #[arg(long)]
    pub sigma_h: Option<f64>,
    /// Fading variance σ_H² (exclusive with --sigma-h).
    #[arg(long)]
    pub sigma_h2: Option<f64>,
    /// Rician K factor (required with --fading rician).
    #[arg(long)]
    pub k: Option<f64>,
    /// Accepted outage probability for the slow regime (default 0.1).
    #[arg(long)]
    pub p_out: Option<f64>,
    /// Scan rate vs outage probability with argmax annotations.
    #[arg(long)]
    pub outage_scan: bool,
    /// Outage-probability grid for --outage-scan (default 0.01:0.5:0.01).
    #[arg(long)]
    pub p_out_grid: Option<String>,
    /// Emit the Table 2 difference table (requires --snr-db 10 if given).
    #[arg(long)]
    pub table2: bool,
}

#[derive(Args, Debug, Default)]
pub struct ValidateArgs {
    /// Criteria to run: `all` or comma-separated ids 1..=10 (default all).
    #[arg(long)]
    pub criteria: Option<String>,
}

/// Resolve the master seed: flag > config file > `JRC_SEED` > 12345.
fn resolve_seed(flag: Option<u64>, file: &FileConfig) -> anyhow::Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Some(s) = file.seed {
        return Ok(s);
    }
    match std::env::var("JRC_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| anyhow::anyhow!("JRC_SEED must be an unsigned integer, got `{text}`")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Parse the real command line and run. Clap usage errors exit with code 2
/// before this returns.
pub fn run() -> anyhow::Result<()> {
    run_with(Cli::parse())
}

/// Run an already-parsed invocation (separated for tests).
pub fn run_with(cli: Cli) -> anyhow::Result<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let seed = resolve_seed(cli.seed, &file)?;
    let dir = cli
        .output
        .clone()
        .or_else(|| file.output.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let out = OutputCtx {
        dir,
        no_timestamp: cli.no_timestamp,
        seed,
        bits: cli.bits || file.bits.unwrap_or(false),
    };
    match &cli.command {
        Command::Waveform(args) => commands::cmd_waveform(args, &file, &out),
        Command::Pdf(args) => commands::cmd_pdf(args, &file, &out),
        Command::Capacity(args) => commands::cmd_capacity(args, &file, &out),
        Command::Validate(args) => commands::cmd_validate(args, &file, &out),
    }
}
