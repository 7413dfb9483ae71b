//! Command-line front end for the weakmeas library.
//!
//! Every subcommand resolves its flags into library calls and emits either
//! a single key=value line or a CSV page with `#` metadata lines. Output
//! is byte-deterministic for a fixed command line. Exit codes: 0 success,
//! 2 domain error from the library, 3 oracle disagreement, 64 command-line
//! misuse, 74 output I/O failure.

mod checks;
mod commands;
mod figures;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::exit;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "weakmeas",
    version,
    about = "Closed-form, series, and grid statistics for post-selected weak measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One-line closed-form statistics at a single working point
    Stats(StatsArgs),
    /// CSV table of closed-form statistics over an s and angle lattice
    Scan(ScanArgs),
    /// Initial and post-selected pointer densities along one axis
    Density(DensityArgs),
    /// Optimal working lines and the global deflection maximum
    Optimal(OptimalArgs),
    /// Data behind one of the ten standard plots
    Figure(FigureArgs),
    /// Closed forms checked against the independent series and grid routes
    OracleCheck(OracleCheckArgs),
    /// Three-route report on the orthogonal post-selection formulas
    Errata(ErrataArgs),
    /// Monte Carlo square-root-of-N scaling at a working point
    Ensemble(EnsembleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SetupKind {
    /// Spin-1/2 sequence read out in p_z
    Aav,
    /// Sagnac dark port read out in k x
    Dsjh,
    /// Any regular weak value, via --weak-value
    Custom,
}

impl SetupKind {
    fn label(self) -> &'static str {
        match self {
            SetupKind::Aav => "aav",
            SetupKind::Dsjh => "dsjh",
            SetupKind::Custom => "custom",
        }
    }
}

/// Inclusive lattice LO:HI:STEPS with at least two points.
#[derive(Clone, Copy)]
struct RangeSpec {
    lo: f64,
    hi: f64,
    steps: usize,
}

impl RangeSpec {
    fn values(self) -> Vec<f64> {
        let span = self.hi - self.lo;
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.hi
                } else {
                    self.lo + span * i as f64 / last as f64
                }
            })
            .collect()
    }
}

fn parse_range(text: &str) -> Result<RangeSpec, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected LO:HI:STEPS, got {text:?}"));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| format!("bad lower bound {:?}", parts[0]))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| format!("bad upper bound {:?}", parts[1]))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| format!("bad step count {:?}", parts[2]))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err("range bounds must be finite with LO < HI".into());
    }
    if steps < 2 {
        return Err("a range needs at least two steps".into());
    }
    Ok(RangeSpec { lo, hi, steps })
}

fn parse_weak_value(text: &str) -> Result<(f64, f64), String> {
    let mut parts = text.split(',');
    let re: f64 = parts
        .next()
        .expect("split yields at least one part")
        .trim()
        .parse()
        .map_err(|_| format!("bad real part in {text:?}"))?;
    let im = match parts.next() {
        None => 0.0,
        Some(part) => part
            .trim()
            .parse()
            .map_err(|_| format!("bad imaginary part in {text:?}"))?,
    };
    if parts.next().is_some() {
        return Err(format!("expected RE or RE,IM, got {text:?}"));
    }
    Ok((re, im))
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct StatsArgs {
    #[arg(long, value_enum)]
    setup: SetupKind,
    /// Coupling strength s
    #[arg(long)]
    s: f64,
    /// Pre-selection angle alpha (aav) or phase phi (dsjh)
    #[arg(long)]
    angle: Option<f64>,
    /// Interpret input angles as degrees (output stays in radians)
    #[arg(long)]
    degrees: bool,
    /// Weak value RE or RE,IM for the custom setup (use --weak-value=-1,0.5 for negative parts)
    #[arg(long, value_parser = parse_weak_value)]
    weak_value: Option<(f64, f64)>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ScanArgs {
    #[arg(long, value_enum)]
    setup: SetupKind,
    /// Coupling lattice LO:HI:STEPS
    #[arg(long, value_parser = parse_range)]
    s_range: RangeSpec,
    /// Angle lattice LO:HI:STEPS
    #[arg(long, value_parser = parse_range)]
    angle_range: RangeSpec,
    /// Interpret input angles as degrees (output stays in radians)
    #[arg(long)]
    degrees: bool,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    /// Coupled variable u = g p
    P,
    /// Read-out variable v = q / g
    Q,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct DensityArgs {
    #[arg(long, value_enum)]
    setup: SetupKind,
    /// Coupling strength s
    #[arg(long)]
    s: f64,
    /// Pre-selection angle alpha (aav) or phase phi (dsjh)
    #[arg(long)]
    angle: Option<f64>,
    /// Interpret input angles as degrees (output stays in radians)
    #[arg(long)]
    degrees: bool,
    /// Weak value RE or RE,IM for the custom setup (use --weak-value=-1,0.5 for negative parts)
    #[arg(long, value_parser = parse_weak_value)]
    weak_value: Option<(f64, f64)>,
    /// Which axis to tabulate
    #[arg(long, value_enum, default_value = "p")]
    space: SpaceArg,
    /// Number of tabulation points
    #[arg(long, default_value_t = 2001)]
    points: usize,
    /// Half-width of the window around the post-selected mean
    #[arg(long)]
    half_width: Option<f64>,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OptimalKind {
    /// Angle maximizing the mean deflection at each s
    Expectation,
    /// Angle maximizing the single-shot SNR at each s
    Snr,
    /// Global maximum of the deflection over s and angle together
    Max,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct OptimalArgs {
    #[arg(long, value_enum)]
    setup: SetupKind,
    #[arg(long, value_enum)]
    kind: OptimalKind,
    /// Coupling lattice LO:HI:STEPS (expectation and snr kinds)
    #[arg(long, value_parser = parse_range)]
    s_range: Option<RangeSpec>,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct FigureArgs {
    /// Figure number, 1 through 10
    number: u32,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct OracleCheckArgs {
    #[arg(long, value_enum)]
    setup: SetupKind,
    /// Coupling strength s
    #[arg(long)]
    s: f64,
    /// Pre-selection angle alpha (aav) or phase phi (dsjh)
    #[arg(long)]
    angle: Option<f64>,
    /// Interpret input angles as degrees (output stays in radians)
    #[arg(long)]
    degrees: bool,
    /// Weak value RE or RE,IM for the custom setup (use --weak-value=-1,0.5 for negative parts)
    #[arg(long, value_parser = parse_weak_value)]
    weak_value: Option<(f64, f64)>,
    /// Grid points for the wavefunction route (power of two)
    #[arg(long)]
    points: Option<usize>,
    /// Momentum half-width for the wavefunction route
    #[arg(long)]
    half_width: Option<f64>,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ErrataArgs {
    /// Couplings to tabulate
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    s_list: Option<Vec<f64>>,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct EnsembleArgs {
    #[arg(long, value_enum)]
    setup: SetupKind,
    /// Coupling strength s
    #[arg(long)]
    s: f64,
    /// Working angle; defaults to the optimal-SNR angle at s
    #[arg(long)]
    angle: Option<f64>,
    /// Interpret input angles as degrees (output stays in radians)
    #[arg(long)]
    degrees: bool,
    /// Ensemble sizes for the scaling fit
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    n_values: Option<Vec<usize>>,
    /// Independent repetitions per ensemble size
    #[arg(long, default_value_t = 4000)]
    trials: usize,
    /// Root seed for the sample streams
    #[arg(long, default_value_t = 20240813)]
    seed: u64,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    /// Contradictory or incomplete flags (exit 64)
    Usage(String),
    /// Rejected by the library's domain validation (exit 2)
    Lib(weakmeas::Error),
    /// Output could not be written (exit 74)
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Lib(_) => 2,
            CliError::Io(_) => 74,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Lib(err) => write!(f, "{err}"),
            CliError::Io(err) => write!(f, "writing output failed: {err}"),
        }
    }
}

impl From<weakmeas::Error> for CliError {
    fn from(err: weakmeas::Error) -> Self {
        CliError::Lib(err)
    }
}

fn to_radians(angle: f64, degrees: bool) -> f64 {
    if degrees {
        angle.to_radians()
    } else {
        angle
    }
}

/// The angle flag for a named setup, converted to radians.
fn require_angle(angle: Option<f64>, degrees: bool, setup: SetupKind) -> Result<f64, CliError> {
    if setup == SetupKind::Custom {
        return Err(CliError::Usage(
            "the custom setup takes --weak-value, not --angle".into(),
        ));
    }
    match angle {
        Some(a) => Ok(to_radians(a, degrees)),
        None => Err(CliError::Usage(format!(
            "--setup {} needs --angle",
            setup.label()
        ))),
    }
}

fn require_weak_value(weak_value: Option<(f64, f64)>) -> Result<(f64, f64), CliError> {
    weak_value.ok_or_else(|| CliError::Usage("--setup custom needs --weak-value RE,IM".into()))
}

fn forbid_weak_value(weak_value: Option<(f64, f64)>, setup: SetupKind) -> Result<(), CliError> {
    if weak_value.is_some() {
        return Err(CliError::Usage(format!(
            "--weak-value only applies to --setup custom, not {}",
            setup.label()
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Stats(args) => commands::stats(args),
        Command::Scan(args) => commands::scan(args),
        Command::Density(args) => commands::density(args),
        Command::Optimal(args) => commands::optimal(args),
        Command::Figure(args) => figures::figure(args),
        Command::OracleCheck(args) => checks::oracle_check(args),
        Command::Errata(args) => checks::errata(args),
        Command::Ensemble(args) => commands::ensemble(args),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = err.print();
            exit(code);
        }
    };
    match run(cli) {
        Ok(code) => exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            exit(err.exit_code());
        }
    }
}
