//! Command-line front end.
//!
//! Every subcommand's flags form a serializable config. `--save-config`
//! writes it out and `--config` replays it, so a run is reproducible from a
//! single JSON file.

mod commands;
mod output;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::circuit::NoiseParams;
use crate::ensembles::WhiteBoxSet;
use crate::error::{Error, Result};

pub use output::{ResultRecord, VERSION};

#[derive(Debug, Parser)]
#[command(name = "noisy-fourier", version, about = "Fourier-path simulation of Pauli-twirled noisy circuits")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Run the experiment stored in this JSON config instead of the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the effective config to this path before running.
    #[arg(long, global = true)]
    pub save_config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

/// One experiment, as stored in a config file.
#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Generate a random circuit instance.
    Gen(GenArgs),
    /// Exact output distributions for one twirl string.
    Oracle(OracleArgs),
    /// Export the Fourier spectrum as JSON lines.
    Spectrum(SpectrumArgs),
    /// Truncated Fourier approximation of an output probability.
    Approx(ApproxArgs),
    /// Distance to uniform over sampled twirl strings.
    Theorem1(Theorem1Args),
    /// Collision-probability estimate of a noiseless ensemble.
    Anticoncentration(AntiConcentrationArgs),
    /// Truncation error statistics against the exact distribution.
    Stats(StatsArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Oracle(_) => "oracle",
            Command::Spectrum(_) => "spectrum",
            Command::Approx(_) => "approx",
            Command::Theorem1(_) => "theorem1",
            Command::Anticoncentration(_) => "anticoncentration",
            Command::Stats(_) => "stats",
        }
    }
}

/// Noise overrides. `--epsilon` sets `e1 = e2 = ε, e3 = 0`; the individual
/// rates are applied on top.
#[derive(Clone, Debug, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct NoiseArgs {
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub e1: Option<f64>,
    #[arg(long)]
    pub e2: Option<f64>,
    #[arg(long)]
    pub e3: Option<f64>,
}

impl NoiseArgs {
    pub fn resolve(&self, base: NoiseParams) -> Result<NoiseParams> {
        let mut np = base;
        if let Some(eps) = self.epsilon {
            np = NoiseParams { e1: eps, e2: eps, e3: 0.0 };
        }
        np.e1 = self.e1.unwrap_or(np.e1);
        np.e2 = self.e2.unwrap_or(np.e2);
        np.e3 = self.e3.unwrap_or(np.e3);
        NoiseParams::new(np.e1, np.e2, np.e3)
    }

    pub fn is_empty(&self) -> bool {
        self == &NoiseArgs::default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum GateSet {
    HTCnot,
    HSCnotT,
    RandomSu4,
}

impl From<GateSet> for WhiteBoxSet {
    fn from(s: GateSet) -> Self {
        match s {
            GateSet::HTCnot => WhiteBoxSet::HTCnot,
            GateSet::HSCnotT => WhiteBoxSet::HSCnotT,
            GateSet::RandomSu4 => WhiteBoxSet::RandomSu4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    /// Brickwork with noise after every gate.
    Fig1a,
    /// Clifford blocks with noisy T gates.
    Fig1b,
}

/// Fourier weight cutoff: keep `|s| < l`, or everything.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Cutoff {
    Full,
    Weight(usize),
}

impl Cutoff {
    /// Cutoff as a weight bound for `m` sites.
    pub fn resolve(self, m: usize) -> usize {
        match self {
            Cutoff::Full => 2 * m + 1,
            Cutoff::Weight(l) => l.min(2 * m + 1),
        }
    }
}

impl FromStr for Cutoff {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "full" {
            return Ok(Cutoff::Full);
        }
        s.parse()
            .map(Cutoff::Weight)
            .map_err(|_| Error::Parse(format!("cutoff must be a non-negative integer or \"full\", got {s:?}")))
    }
}

impl TryFrom<String> for Cutoff {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Cutoff> for String {
    fn from(c: Cutoff) -> String {
        c.to_string()
    }
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cutoff::Full => f.write_str("full"),
            Cutoff::Weight(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub n: usize,
    /// Brickwork depth.
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Number of noisy T gates.
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    /// Gates per Clifford block.
    #[arg(long, default_value_t = 4)]
    pub clifford_depth: usize,
    #[arg(long, value_enum, default_value = "random_su4")]
    pub set: GateSet,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Comma-separated measured wires (all by default).
    #[arg(long, value_delimiter = ',')]
    pub measured: Option<Vec<usize>>,
    /// Circuit file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Result record path (stdout when absent).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct OracleArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    /// Twirl string `y1 y2` (all zeros by default).
    #[arg(long)]
    pub y: Option<Bits>,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Include both joint tables over every `y`.
    #[arg(long)]
    pub joint: bool,
    /// Write the noisy spectrum here as JSON lines.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Exact joint tables.
    Oracle,
    /// Truncated series from Pauli propagation.
    Fast,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Transform the noiseless distribution instead of the noisy one.
    #[arg(long)]
    pub noiseless: bool,
    #[arg(long, value_enum, default_value = "oracle")]
    pub source: Source,
    /// Weight cutoff for the fast source.
    #[arg(long, default_value = "full")]
    pub l: Cutoff,
    /// JSON-lines output.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct ApproxArgs {
    /// Without a circuit only the cutoff is computed.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    #[arg(long)]
    pub y: Option<Bits>,
    /// Single outcome; the whole distribution when absent.
    #[arg(long)]
    pub x: Option<Bits>,
    #[arg(long, conflicts_with_all = ["delta", "eta"])]
    pub l: Option<Cutoff>,
    #[arg(long, requires = "eta")]
    pub delta: Option<f64>,
    #[arg(long, requires = "delta")]
    pub eta: Option<f64>,
    /// Measured-wire count used by the cutoff formula.
    #[arg(long)]
    pub r: Option<usize>,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Also report the clipped and renormalised distribution.
    #[arg(long)]
    pub clip: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct Theorem1Args {
    /// Fixed instance; otherwise brickwork instances are generated.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Comma-separated depths to sweep.
    #[arg(long, value_delimiter = ',', default_value = "4")]
    pub d: Vec<usize>,
    #[arg(long, value_enum, default_value = "random_su4")]
    pub set: GateSet,
    /// First generator seed; instance `i` uses `seed + i`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Instances per depth.
    #[arg(long, default_value_t = 1)]
    pub instances: usize,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub sample_seed: u64,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcKind {
    Fig1a,
    /// Uniform words over `{H, S, CNOT}`.
    Clifford,
    Identity,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct AntiConcentrationArgs {
    #[arg(long, value_enum)]
    pub ensemble: AcKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub d: usize,
    #[arg(long, value_enum, default_value = "random_su4")]
    pub set: GateSet,
    /// Clifford word length.
    #[arg(long, default_value_t = 60)]
    pub length: usize,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct StatsArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    /// Comma-separated cutoffs (`1..=2m` by default).
    #[arg(long, value_delimiter = ',')]
    pub l: Option<Vec<usize>>,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[arg(long, value_enum, default_value = "oracle")]
    pub source: Source,
    /// Replace `√(2^r)` in the bound by `√α`.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

pub fn load_config(path: &std::path::Path) -> Result<Command> {
    serde_json::from_str(&fs::read_to_string(path)?).map_err(|e| Error::Parse(format!("config file: {e}")))
}

pub fn save_config(path: &std::path::Path, cmd: &Command) -> Result<()> {
    let mut text = serde_json::to_string_pretty(cmd)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn resolve(cli: Cli) -> Result<(Command, Option<usize>)> {
    let cmd = match (cli.config, cli.command) {
        (Some(path), None) => load_config(&path)?,
        (None, Some(cmd)) => cmd,
        (Some(_), Some(_)) => return Err(Error::InvalidParameter("give either --config or a subcommand, not both".into())),
        (None, None) => return Err(Error::InvalidParameter("no subcommand given (see --help)".into())),
    };
    if let Some(path) = &cli.save_config {
        save_config(path, &cmd)?;
    }
    Ok((cmd, cli.threads))
}

/// Runs one experiment on a pool of `threads` workers.
pub fn execute(cmd: &Command, threads: Option<usize>) -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(Error::InvalidParameter("--threads must be positive".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| commands::dispatch(cmd))
}

/// Parses `args`, runs the experiment and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match resolve(cli).and_then(|(cmd, threads)| execute(&cmd, threads)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Command {
        let mut full = vec!["noisy-fourier"];
        full.extend_from_slice(args);
        Cli::try_parse_from(full).unwrap().command.unwrap()
    }

    #[test]
    fn configs_round_trip() {
        let cmds = [
            parse(&["gen", "--kind", "fig1a", "--n", "3", "--d", "3", "--seed", "5", "--out", "a.json", "--e1", "0.1"]),
            parse(&["oracle", "--circuit", "c.json", "--y", "0110", "--epsilon", "0.1", "--joint"]),
            parse(&["spectrum", "--circuit", "c.json", "--source", "fast", "--l", "3", "--out", "s.jsonl"]),
            parse(&["approx", "--delta", "0.01", "--eta", "0.01", "--epsilon", "0.1", "--r", "1"]),
            parse(&["approx", "--circuit", "c.json", "--l", "full", "--x", "01"]),
            parse(&["theorem1", "--d", "2,3,4", "--epsilon", "0.15", "--csv", "t.csv"]),
            parse(&["anticoncentration", "--ensemble", "clifford", "--n", "2", "--alpha", "2"]),
            parse(&["stats", "--circuit", "c.json", "--l", "1,2,3", "--e1", "0.1", "--e2", "0.3"]),
        ];
        for cmd in cmds {
            let text = serde_json::to_string(&cmd).unwrap();
            let back: Command = serde_json::from_str(&text).unwrap();
            assert_eq!(back, cmd, "{text}");
        }
    }

    #[test]
    fn cutoff_parsing() {
        assert_eq!("full".parse::<Cutoff>().unwrap(), Cutoff::Full);
        assert_eq!("4".parse::<Cutoff>().unwrap(), Cutoff::Weight(4));
        assert!("-1".parse::<Cutoff>().is_err());
        assert_eq!(Cutoff::Full.resolve(3), 7);
        assert_eq!(Cutoff::Weight(40).resolve(3), 7);
    }

    #[test]
    fn noise_overrides() {
        let base = NoiseParams::new(0.1, 0.2, 0.05).unwrap();
        let a = NoiseArgs { epsilon: Some(0.0), ..Default::default() };
        assert!(a.resolve(base).unwrap().is_noiseless());
        let b = NoiseArgs { e2: Some(0.3), ..Default::default() };
        assert_eq!(b.resolve(base).unwrap(), NoiseParams::new(0.1, 0.3, 0.05).unwrap());
        assert!(NoiseArgs { e1: Some(0.7), ..Default::default() }.resolve(base).is_err());
    }

    #[test]
    fn usage_errors_exit_with_one() {
        assert_eq!(main_with_args(["noisy-fourier", "gen", "--bogus"]), 1);
        assert_eq!(main_with_args(["noisy-fourier"]), 1);
        assert_eq!(main_with_args(["noisy-fourier", "--help"]), 0);
    }
}
