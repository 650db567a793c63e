//! Argument parsing.
//!
//! A `--config <path>` file is expanded into `--key=value` flags placed
//! before the explicit ones, so explicit flags win on conflict.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser};
use mimo_capacity_core::channel::{
    exp_decay_tap_powers, uniform_tap_powers, AntennaConfig, CorrelationKind, CorrelationProfile,
    ToneGrid,
};
use mimo_capacity_core::sweep::{ChannelSpec, EstimatorKind, SnrGrid, SweepConfig};

use crate::config::{parse_config, to_flags};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: u64 = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "mimo-capacity",
    version,
    about = "Monte Carlo capacity sweeps for MIMO and MIMO-OFDM fading channels",
    args_override_self = true,
    subcommand_required = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Subcommand)]
enum Command {
    /// Ergodic capacity of the i.i.d. Rayleigh flat-fading channel.
    Ergodic(FlatArgs),
    /// x% outage capacity of the i.i.d. Rayleigh flat-fading channel.
    Outage {
        #[command(flatten)]
        flat: FlatArgs,
        /// Outage percentage x in (0, 100).
        #[arg(long, value_parser = parse_percent, default_value_t = 10.0)]
        percent: f64,
    },
    /// Ergodic (or, with --percent, outage) capacity of a tap-delay channel over OFDM tones.
    Ofdm {
        #[command(flatten)]
        flat: FlatArgs,
        #[command(flatten)]
        taps: TapArgs,
        /// Number of OFDM tones.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..), default_value_t = 64)]
        tones: u64,
        /// Report the x% outage capacity as well.
        #[arg(long, value_parser = parse_percent)]
        percent: Option<f64>,
    },
    /// Uniform power versus water-filling with transmitter CSI.
    WaterfillCompare(FlatArgs),
    /// Deterministic large-array and low-SNR capacity limits.
    Asymptotic {
        /// Receive antennas N.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..), default_value_t = 2)]
        rx: u64,
        #[command(flatten)]
        taps: TapArgs,
        /// SNR grid in dB, read as the rescaled SNR: start:stop:step or a single value.
        #[arg(long = "snr-db", value_parser = parse_grid, allow_hyphen_values = true, default_value = "0:30:3")]
        snr_db: SnrGrid,
        #[command(flatten)]
        io: IoArgs,
    },
}

#[derive(Debug, Args)]
struct FlatArgs {
    /// Transmit antennas M.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), default_value_t = 2)]
    tx: u64,
    /// Receive antennas N.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), default_value_t = 2)]
    rx: u64,
    /// SNR grid in dB: start:stop:step or a single value.
    #[arg(long = "snr-db", value_parser = parse_grid, allow_hyphen_values = true, default_value = "0:20:2")]
    snr_db: SnrGrid,
    /// Monte Carlo trials per SNR point.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), default_value_t = DEFAULT_TRIALS)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (default: available parallelism). Output does not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Debug, Args)]
struct TapArgs {
    /// Number of channel taps L.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), default_value_t = 1)]
    taps: u64,
    /// Exponential receive-correlation coefficient in [0, 1); 0 is uncorrelated.
    #[arg(long, value_parser = parse_corr, default_value_t = 0.0)]
    corr: f64,
    /// Tap power profile: uniform or expdecay:<rate>.
    #[arg(long = "tap-powers", value_parser = parse_tap_powers, default_value = "uniform")]
    tap_powers: TapPowers,
}

#[derive(Debug, Args)]
struct IoArgs {
    /// Output CSV path; `-` for standard output.
    #[arg(long, default_value = "-")]
    out: String,
    /// key=value file mirroring the flags; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TapPowers {
    Uniform,
    ExpDecay(f64),
}

impl TapPowers {
    fn weights(self, taps: usize) -> Vec<f64> {
        match self {
            Self::Uniform => uniform_tap_powers(taps),
            Self::ExpDecay(rate) => exp_decay_tap_powers(taps, rate),
        }
    }
}

fn parse_percent(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if x > 0.0 && x < 100.0 {
        Ok(x)
    } else {
        Err("outage percentage must lie strictly between 0 and 100".into())
    }
}

fn parse_corr(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..1.0).contains(&x) {
        Ok(x)
    } else {
        Err("correlation coefficient must lie in [0, 1)".into())
    }
}

fn parse_grid(s: &str) -> Result<SnrGrid, String> {
    let num = |part: &str| -> Result<f64, String> {
        part.trim().parse().map_err(|_| format!("`{part}` is not a number"))
    };
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [value] => SnrGrid::single(num(value)?),
        [start, stop, step] => SnrGrid::new(num(start)?, num(stop)?, num(step)?),
        _ => return Err("expected start:stop:step or a single value".into()),
    };
    grid.map_err(|e| e.to_string())
}

fn parse_tap_powers(s: &str) -> Result<TapPowers, String> {
    if s == "uniform" {
        return Ok(TapPowers::Uniform);
    }
    if let Some(rate) = s.strip_prefix("expdecay:") {
        let rate: f64 = rate.parse().map_err(|_| format!("`{rate}` is not a number"))?;
        if rate.is_finite() && rate >= 0.0 {
            return Ok(TapPowers::ExpDecay(rate));
        }
        return Err("decay rate must be finite and non-negative".into());
    }
    Err("expected `uniform` or `expdecay:<rate>`".into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Ergodic,
    Outage,
    Ofdm,
    WaterfillCompare,
    Asymptotic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Output {
    Stdout,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliInvocation {
    pub subcommand: Subcommand,
    pub sweep: SweepConfig,
    pub workers: Option<usize>,
    pub output: Output,
}

#[derive(Debug)]
pub enum UsageError {
    /// Includes `--help` and `--version` requests; see [`UsageError::is_info`].
    Clap(clap::Error),
    Message(String),
}

impl UsageError {
    /// True for help/version output, which is not a failure.
    pub fn is_info(&self) -> bool {
        matches!(self, Self::Clap(e) if matches!(
            e.kind(),
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
        ))
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Clap(e) => write!(f, "{}", e.render()),
            Self::Message(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for UsageError {}

impl From<clap::Error> for UsageError {
    fn from(e: clap::Error) -> Self {
        Self::Clap(e)
    }
}

/// Removes `--config <path>` / `--config=<path>` and returns the path.
fn extract_config(args: &mut Vec<String>) -> Result<Option<PathBuf>, UsageError> {
    let mut found = None;
    let mut i = 0;
    while i < args.len() {
        if args[i] == "--config" {
            let path = args.get(i + 1).cloned().ok_or_else(|| {
                UsageError::Message("a value is required for '--config <CONFIG>'".into())
            })?;
            found = Some(PathBuf::from(path));
            args.drain(i..i + 2);
        } else if let Some(path) = args[i].strip_prefix("--config=") {
            found = Some(PathBuf::from(path));
            args.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(found)
}

fn expand_config(argv: Vec<String>) -> Result<Vec<String>, UsageError> {
    // argv[0] is the program, argv[1] the subcommand
    if argv.len() < 2 || argv[1].starts_with('-') {
        return Ok(argv);
    }
    let mut rest = argv[2..].to_vec();
    let Some(path) = extract_config(&mut rest)? else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| {
        UsageError::Message(format!("cannot read '--config {}': {e}", path.display()))
    })?;
    let entries = parse_config(&text).map_err(|e| {
        UsageError::Message(format!("invalid '--config {}': {e}", path.display()))
    })?;
    let mut out = argv[..2].to_vec();
    out.extend(to_flags(&entries));
    out.extend(rest);
    Ok(out)
}

fn profile(taps: &TapArgs) -> Result<CorrelationProfile, UsageError> {
    let kind = if taps.corr == 0.0 {
        CorrelationKind::Uncorrelated
    } else {
        CorrelationKind::Exponential { coefficient: taps.corr }
    };
    CorrelationProfile::new(kind, taps.tap_powers.weights(taps.taps as usize))
        .map_err(|e| UsageError::Message(format!("invalid tap profile: {e}")))
}

fn output(io: &IoArgs) -> Output {
    if io.out == "-" {
        Output::Stdout
    } else {
        Output::File(PathBuf::from(&io.out))
    }
}

fn flat_sweep(flat: &FlatArgs, channel: ChannelSpec, estimator: EstimatorKind) -> Result<SweepConfig, UsageError> {
    let antennas = AntennaConfig::new(flat.tx as usize, flat.rx as usize)
        .map_err(|e| UsageError::Message(e.to_string()))?;
    Ok(SweepConfig {
        antennas,
        snr: flat.snr_db,
        trials: flat.trials,
        seed: flat.seed,
        channel,
        estimator,
    })
}

/// Parses a full argument vector (program name first).
pub fn parse_args<I, T>(argv: I) -> Result<CliInvocation, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<String> = argv
        .into_iter()
        .map(|a| {
            a.into()
                .into_string()
                .map_err(|a| UsageError::Message(format!("argument is not UTF-8: {a:?}")))
        })
        .collect::<Result<_, _>>()?;
    let cli = Cli::try_parse_from(expand_config(argv)?)?;

    let invocation = match cli.command {
        Command::Ergodic(flat) => CliInvocation {
            subcommand: Subcommand::Ergodic,
            sweep: flat_sweep(&flat, ChannelSpec::Flat, EstimatorKind::Ergodic)?,
            workers: flat.workers.map(|w| w as usize),
            output: output(&flat.io),
        },
        Command::Outage { flat, percent } => CliInvocation {
            subcommand: Subcommand::Outage,
            sweep: flat_sweep(&flat, ChannelSpec::Flat, EstimatorKind::Outage { percent })?,
            workers: flat.workers.map(|w| w as usize),
            output: output(&flat.io),
        },
        Command::Ofdm { flat, taps, tones, percent } => {
            let tones = ToneGrid::new(tones as usize).map_err(|e| UsageError::Message(e.to_string()))?;
            let channel = ChannelSpec::Taps { profile: profile(&taps)?, tones };
            let estimator = match percent {
                Some(percent) => EstimatorKind::Outage { percent },
                None => EstimatorKind::Ergodic,
            };
            CliInvocation {
                subcommand: Subcommand::Ofdm,
                sweep: flat_sweep(&flat, channel, estimator)?,
                workers: flat.workers.map(|w| w as usize),
                output: output(&flat.io),
            }
        }
        Command::WaterfillCompare(flat) => CliInvocation {
            subcommand: Subcommand::WaterfillCompare,
            sweep: flat_sweep(&flat, ChannelSpec::Flat, EstimatorKind::WaterfillCompare)?,
            workers: flat.workers.map(|w| w as usize),
            output: output(&flat.io),
        },
        Command::Asymptotic { rx, taps, snr_db, io } => {
            let antennas =
                AntennaConfig::new(1, rx as usize).map_err(|e| UsageError::Message(e.to_string()))?;
            CliInvocation {
                subcommand: Subcommand::Asymptotic,
                sweep: SweepConfig {
                    antennas,
                    snr: snr_db,
                    trials: 0,
                    seed: 0,
                    channel: ChannelSpec::Taps { profile: profile(&taps)?, tones: ToneGrid::new(1).unwrap() },
                    estimator: EstimatorKind::Asymptotic,
                },
                workers: None,
                output: output(&io),
            }
        }
    };
    Ok(invocation)
}
