use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geogate_core::analysis::{Normalization, StdConvention};
use geogate_core::lie::Axis;
use geogate_core::sim::{Entangler, StartState};
use geogate_core::train::{Mode, OptimizerKind};

#[derive(Debug, Parser)]
#[command(
    name = "geogate",
    version,
    about = "Lie-group diagnostics for variational circuit training"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train one circuit and record its angle trajectory.
    Train(TrainArgs),
    /// Compute trajectory metrics (velocity, acceleration, RSD, energy, length).
    Analyze(AnalyzeArgs),
    /// Sample one parameter lifted into SU(2) as `k,y`.
    Groupmap(GroupmapArgs),
    /// Central-difference velocity and acceleration of one parameter.
    Kinematics(KinematicsArgs),
    /// Geodesic deviation of one lifted parameter column.
    Deviation(DeviationArgs),
    /// Bloch-sphere sweep of a single rotation gate.
    Bloch(BlochArgs),
    /// Gradient-variance scan over qubit counts.
    Plateau(PlateauArgs),
    /// Median comparison of with-NN and without-NN metrics.
    Compare(CompareArgs),
    /// Full with/without experiment: traces, metrics, figure data, comparison.
    Reproduce(ReproduceArgs),
    /// Re-run the command recorded in a manifest and verify its outputs.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Direct,
    Nn,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Direct => Mode::Direct,
            ModeArg::Nn => Mode::Nn,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OptimizerArg {
    Gd,
    Adam,
}

impl From<OptimizerArg> for OptimizerKind {
    fn from(o: OptimizerArg) -> Self {
        match o {
            OptimizerArg::Gd => OptimizerKind::Gd,
            OptimizerArg::Adam => OptimizerKind::Adam,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    X,
    Y,
    Z,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::X => Axis::X,
            AxisArg::Y => Axis::Y,
            AxisArg::Z => Axis::Z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EntanglerArg {
    Ring,
    Line,
}

impl From<EntanglerArg> for Entangler {
    fn from(e: EntanglerArg) -> Self {
        match e {
            EntanglerArg::Ring => Entangler::RingCnot,
            EntanglerArg::Line => Entangler::LineCnot,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateArg {
    Rx,
    Ry,
    Rz,
}

impl From<GateArg> for Axis {
    fn from(g: GateArg) -> Self {
        match g {
            GateArg::Rx => Axis::X,
            GateArg::Ry => Axis::Y,
            GateArg::Rz => Axis::Z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateArg {
    Zero,
    Plus,
}

impl From<StateArg> for StartState {
    fn from(s: StateArg) -> Self {
        match s {
            StateArg::Zero => StartState::Zero,
            StateArg::Plus => StartState::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizeArg {
    Auto,
    On,
    Off,
}

impl From<NormalizeArg> for Normalization {
    fn from(n: NormalizeArg) -> Self {
        match n {
            NormalizeArg::Auto => Normalization::Auto,
            NormalizeArg::On => Normalization::On,
            NormalizeArg::Off => Normalization::Off,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StdArg {
    Population,
    Sample,
}

impl From<StdArg> for StdConvention {
    fn from(s: StdArg) -> Self {
        match s {
            StdArg::Population => StdConvention::Population,
            StdArg::Sample => StdConvention::Sample,
        }
    }
}

/// `auto` or a positive integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stride {
    Auto,
    Fixed(usize),
}

fn parse_stride(s: &str) -> Result<Stride, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Stride::Auto);
    }
    match s.parse::<usize>() {
        Ok(0) => Err("stride must be at least 1".into()),
        Ok(k) => Ok(Stride::Fixed(k)),
        Err(_) => Err(format!("expected 'auto' or a positive integer, got '{s}'")),
    }
}

/// `A..B` (inclusive) or a single `N`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected N or A..B, got '{s}'");
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            (
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            )
        }
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(format!("empty range '{s}'"));
    }
    Ok(lo..=hi)
}

#[derive(Debug, Clone, Args)]
pub struct SeedArg {
    /// Random seed.
    #[arg(long, env = "GEOGATE_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub qubits: usize,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Optimizer steps.
    #[arg(long, default_value_t = 500)]
    pub iters: usize,
    /// Learning rate [default: 0.05 direct, 0.005 nn].
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long, value_enum, default_value_t = OptimizerArg::Gd)]
    pub optimizer: OptimizerArg,
    /// Circuit layers [default: one per qubit].
    #[arg(long)]
    pub layers: Option<usize>,
    /// Rotation axis of every layer.
    #[arg(long, value_enum, default_value_t = AxisArg::Y)]
    pub axis: AxisArg,
    #[arg(long, value_enum, default_value_t = EntanglerArg::Ring)]
    pub entangler: EntanglerArg,
    /// Generator hidden width (nn mode).
    #[arg(long, default_value_t = 32)]
    pub hidden: usize,
    /// Generator input width (nn mode).
    #[arg(long, default_value_t = 8)]
    pub input_dim: usize,
    /// Also write the final generator weights as JSON (nn mode).
    #[arg(long)]
    pub save_weights: Option<PathBuf>,
    /// Trajectory CSV; the sidecar and manifest are written next to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub trace: PathBuf,
    /// Central-difference offset in iterations.
    #[arg(long, default_value_t = 5)]
    pub dt: usize,
    /// `auto` normalizes direct-mode traces only (needs the sidecar).
    #[arg(long, value_enum, default_value_t = NormalizeArg::Auto)]
    pub normalize: NormalizeArg,
    /// Statistics of signed velocity/acceleration instead of magnitudes.
    #[arg(long)]
    pub signed: bool,
    #[arg(long, value_enum, default_value_t = StdArg::Population)]
    pub std: StdArg,
    /// Metrics JSON.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct GroupmapArgs {
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub column: usize,
    #[arg(long, value_enum, default_value_t = AxisArg::Y)]
    pub axis: AxisArg,
    /// `auto` picks the stride from the sidecar's qubit count.
    #[arg(long, value_parser = parse_stride, default_value = "auto")]
    pub stride: Stride,
    #[arg(long, value_enum, default_value_t = NormalizeArg::Off)]
    pub normalize: NormalizeArg,
    /// CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct KinematicsArgs {
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub column: usize,
    #[arg(long, default_value_t = 5)]
    pub dt: usize,
    #[arg(long, value_enum, default_value_t = NormalizeArg::Auto)]
    pub normalize: NormalizeArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DeviationArgs {
    #[arg(long)]
    pub trace: PathBuf,
    /// Columns to score [default: all].
    #[arg(long, value_delimiter = ',')]
    pub column: Vec<usize>,
    #[arg(long, value_enum, default_value_t = AxisArg::Y)]
    pub axis: AxisArg,
    #[arg(long, value_enum, default_value_t = NormalizeArg::Off)]
    pub normalize: NormalizeArg,
    /// Report JSON; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BlochArgs {
    #[arg(long, value_enum)]
    pub gate: GateArg,
    #[arg(long, value_enum, default_value_t = StateArg::Zero)]
    pub state: StateArg,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PlateauArgs {
    /// Qubit counts, `A..B` inclusive.
    #[arg(long, value_parser = parse_range, default_value = "2..9")]
    pub qubits: RangeInclusive<usize>,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Pool every gradient component instead of the first.
    #[arg(long)]
    pub all_components: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Metrics JSON files of the with-NN arm.
    #[arg(long = "with", num_args = 1.., required = true)]
    pub with_nn: Vec<PathBuf>,
    /// Metrics JSON files of the without-NN arm.
    #[arg(long = "without", num_args = 1.., required = true)]
    pub without_nn: Vec<PathBuf>,
    /// Comparison CSV; the aligned table always goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, value_parser = parse_range, default_value = "4..9")]
    pub qubits: RangeInclusive<usize>,
    /// Seeds used by both arms.
    #[arg(long, value_parser = parse_range, default_value = "0..9")]
    pub seeds: RangeInclusive<usize>,
    #[arg(long, default_value_t = 500)]
    pub iters: usize,
    #[arg(long, default_value_t = 5)]
    pub dt: usize,
    /// Samples per qubit count for the variance scan; 0 skips it.
    #[arg(long, default_value_t = 200)]
    pub plateau_samples: usize,
    /// Worker threads [default: all cores].
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}
