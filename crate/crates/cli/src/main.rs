//! `mosaic`: generate stochastic point sets and compare them with digitized
//! cone mosaics.

mod commands;
mod input;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::StyledStr;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use mosaic_core::analysis::PcfMode;
use mosaic_core::samplers::SamplerKind;
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "mosaic", version, about = "Blue-noise samplers and point-set statistics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a point set on the unit torus.
    Generate(GenerateArgs),
    /// Regularity table plus one PCF curve file per input.
    Analyze(AnalyzeArgs),
    /// l-infinity distance between the PCFs of two point sets.
    Compare(CompareArgs),
    /// Radially averaged power spectrum of a point set.
    Spectrum(SpectrumArgs),
    /// Regularity table only.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    #[value(alias = "white-noise")]
    White,
    Jittered,
    #[value(alias = "dart-throwing")]
    Dart,
    #[value(alias = "fast-poisson-disk")]
    Poisson,
    #[value(alias = "blue-noise-opt")]
    Bluenoise,
}

impl From<KindArg> for SamplerKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::White => SamplerKind::WhiteNoise,
            KindArg::Jittered => SamplerKind::Jittered,
            KindArg::Dart => SamplerKind::DartThrowing,
            KindArg::Poisson => SamplerKind::FastPoissonDisk,
            KindArg::Bluenoise => SamplerKind::BlueNoiseOpt,
        }
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    n: usize,
    /// Required: runs are never seeded from the clock.
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    min_dist: Option<f64>,
    #[arg(long, default_value_t = mosaic_core::samplers::DEFAULT_ITERATIONS)]
    iterations: usize,
    #[arg(long, default_value_t = mosaic_core::samplers::DEFAULT_MAX_ATTEMPTS)]
    max_attempts: usize,
    /// Jittered: round a non-square n up to the next square.
    #[arg(long)]
    round_to_square: bool,
    #[arg(long)]
    out: PathBuf,
    /// Defaults to `<out>.manifest.json`.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Raw,
    Calibrated,
}

impl From<ModeArg> for PcfMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Raw => PcfMode::PaperRaw,
            ModeArg::Calibrated => PcfMode::Calibrated,
        }
    }
}

#[derive(Debug, Clone, Args)]
struct PcfArgs {
    #[arg(long, value_enum, default_value = "calibrated")]
    mode: ModeArg,
    #[arg(long, default_value_t = 0.0)]
    r_min: f64,
    #[arg(long, default_value_t = 4.0)]
    r_max: f64,
    #[arg(long, default_value_t = 200)]
    bins: usize,
    /// Gaussian bandwidth in units of d_hex(n).
    #[arg(long, default_value_t = 0.1)]
    sigma: f64,
}

#[derive(Debug, Clone, Args)]
struct LoadArgs {
    /// Physical units per raw coordinate, for files without a domain header.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RowOrder {
    Ri,
    Input,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Tsv,
    Json,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    pcf: PcfArgs,
    #[command(flatten)]
    load: LoadArgs,
    /// Directory for `<stem>.pcf.txt` curve files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value = "input")]
    order: RowOrder,
    #[arg(long, value_enum, default_value = "tsv")]
    format: TableFormat,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    a: PathBuf,
    b: PathBuf,
    #[command(flatten)]
    pcf: PcfArgs,
    #[command(flatten)]
    load: LoadArgs,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 64)]
    max_freq: usize,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    load: LoadArgs,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    load: LoadArgs,
    #[arg(long, value_enum, default_value = "ri")]
    order: RowOrder,
    #[arg(long, value_enum, default_value = "tsv")]
    format: TableFormat,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] mosaic_core::Error),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("all {0} inputs failed")]
    AllFailed(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

/// Usage line of the first subcommand named in `args`, else the top level.
fn usage_for(args: impl Iterator<Item = String>) -> StyledStr {
    let mut cmd = Cli::command();
    cmd.build();
    for arg in args {
        if let Some(sub) = cmd.find_subcommand_mut(&arg) {
            return sub.render_usage();
        }
    }
    cmd.render_usage()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return ExitCode::SUCCESS;
            }
            if !e.render().to_string().contains("Usage:") {
                eprintln!("\n{}", usage_for(std::env::args().skip(1)));
            }
            return ExitCode::from(1);
        }
    };
    let argv: Vec<String> = std::env::args().collect();
    let result = match cli.command {
        Command::Generate(args) => commands::generate(&args, &argv),
        Command::Analyze(args) => commands::analyze(&args, &argv),
        Command::Compare(args) => commands::compare(&args),
        Command::Spectrum(args) => commands::spectrum(&args, &argv),
        Command::Report(args) => commands::report(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("run `mosaic --help` for usage");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
