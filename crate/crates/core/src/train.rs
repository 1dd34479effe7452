//! Parameter-shift gradients and the two training arms.
//!
//! `Direct` optimizes the circuit angles themselves from a uniform random
//! start. `Nn` optimizes the weights of a [`NetworkWeights`] generator whose
//! output is the angle vector; the circuit gradient is pulled back through the
//! network. Both arms record the full angle vector before the first update and
//! after every update.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::rotation_gate;
use crate::nn::NetworkWeights;
use crate::sim::{AnsatzConfig, Operation, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Direct,
    Nn,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Direct => "direct",
            Mode::Nn => "nn",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "direct" => Ok(Mode::Direct),
            "nn" => Ok(Mode::Nn),
            other => Err(format!("unknown mode '{other}', expected direct or nn")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Gd,
    Adam,
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptimizerKind::Gd => "gd",
            OptimizerKind::Adam => "adam",
        })
    }
}

impl FromStr for OptimizerKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gd" | "sgd" => Ok(OptimizerKind::Gd),
            "adam" => Ok(OptimizerKind::Adam),
            other => Err(format!("unknown optimizer '{other}', expected gd or adam")),
        }
    }
}

/// Generator network shape for the `Nn` arm. The input is a constant vector of ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkShape {
    pub input_dim: usize,
    pub hidden_dim: usize,
}

impl Default for NetworkShape {
    fn default() -> Self {
        Self {
            input_dim: 8,
            hidden_dim: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub ansatz: AnsatzConfig,
    pub iterations: usize,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    pub mode: Mode,
    pub seed: u64,
    pub network: NetworkShape,
}

impl TrainConfig {
    pub const DEFAULT_ITERATIONS: usize = 500;
    pub const DEFAULT_LEARNING_RATE: f64 = 0.05;
    /// The generator amplifies weight steps roughly 70-fold in angle space, so
    /// lr 0.05 makes its outputs jump by several radians between iterations.
    /// A tenth of the direct rate keeps the emitted angles continuous.
    pub const DEFAULT_NN_LEARNING_RATE: f64 = 0.005;

    /// Plain gradient descent for 500 iterations at the mode's default rate.
    pub fn new(ansatz: AnsatzConfig, mode: Mode, seed: u64) -> Self {
        Self {
            ansatz,
            iterations: Self::DEFAULT_ITERATIONS,
            learning_rate: Self::default_learning_rate(mode),
            optimizer: OptimizerKind::Gd,
            mode,
            seed,
            network: NetworkShape::default(),
        }
    }

    pub fn default_learning_rate(mode: Mode) -> f64 {
        match mode {
            Mode::Direct => Self::DEFAULT_LEARNING_RATE,
            Mode::Nn => Self::DEFAULT_NN_LEARNING_RATE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.ansatz.validate()?;
        if self.ansatz.num_qubits < 2 {
            return Err(Error::config("training needs at least two qubits"));
        }
        if self.iterations < 2 {
            return Err(Error::config("iterations must be at least 2"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::config("learning rate must be positive and finite"));
        }
        if self.network.input_dim == 0 || self.network.hidden_dim == 0 {
            return Err(Error::config("network dimensions must be at least 1"));
        }
        Ok(())
    }

    pub fn meta(&self) -> TrajectoryMeta {
        TrajectoryMeta {
            mode: self.mode,
            seed: self.seed,
            num_qubits: self.ansatz.num_qubits,
            num_layers: self.ansatz.num_layers,
            optimizer: self.optimizer,
            learning_rate: self.learning_rate,
            iterations: self.iterations,
        }
    }
}

/// Run metadata stored next to a recorded trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub mode: Mode,
    pub seed: u64,
    pub num_qubits: usize,
    pub num_layers: usize,
    pub optimizer: OptimizerKind,
    pub learning_rate: f64,
    pub iterations: usize,
}

/// Recorded angle vectors, one row per iteration; row 0 is the starting point.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterTrajectory {
    rows: Vec<Vec<f64>>,
    pub meta: Option<TrajectoryMeta>,
    pub normalized: bool,
}

impl ParameterTrajectory {
    /// Builds a trajectory from raw rows; every row must have the same non-zero length.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let width = rows.first().map(Vec::len).ok_or(Error::EmptyTrajectory)?;
        if width == 0 {
            return Err(Error::EmptyTrajectory);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != width) {
            return Err(Error::DimensionMismatch {
                expected: width,
                actual: bad.len(),
            });
        }
        Ok(Self {
            rows,
            meta: None,
            normalized: false,
        })
    }

    pub fn with_meta(mut self, meta: TrajectoryMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn parameter_count(&self) -> usize {
        self.rows[0].len()
    }

    /// Number of optimizer steps recorded (rows minus the initial one).
    pub fn iteration_count(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn column(&self, j: usize) -> Result<Vec<f64>> {
        if j >= self.parameter_count() {
            return Err(Error::ColumnOutOfRange {
                column: j,
                columns: self.parameter_count(),
            });
        }
        Ok(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.parameter_count())
            .map(|j| self.rows.iter().map(|r| r[j]).collect())
            .collect()
    }

    /// Rebuilds a trajectory from column vectors, keeping metadata.
    pub(crate) fn with_columns(&self, columns: &[Vec<f64>]) -> Self {
        let rows = (0..self.len())
            .map(|k| columns.iter().map(|c| c[k]).collect())
            .collect();
        Self {
            rows,
            meta: self.meta.clone(),
            normalized: self.normalized,
        }
    }
}

/// Exact gradient of the `⟨Z₀Z₁⟩` cost by the two-term shift rule.
///
/// Component `j` is `[C(θ + π/2 e_j) - C(θ - π/2 e_j)] / 2`. The state right
/// before each rotation is cached so each shifted evaluation only replays the
/// suffix of the circuit.
pub fn parameter_shift_grad(params: &[f64], config: &AnsatzConfig) -> Result<Vec<f64>> {
    config.check_params(params)?;
    if config.num_qubits < 2 {
        return Err(Error::config("the ZZ cost needs at least two qubits"));
    }
    let ops = config.operations();
    let mut prefixes: Vec<(usize, StateVector)> = Vec::with_capacity(params.len());
    let mut state = StateVector::zero(config.num_qubits)?;
    for (i, op) in ops.iter().enumerate() {
        if matches!(op, Operation::Rotation { .. }) {
            prefixes.push((i, state.clone()));
        }
        op.apply(&mut state, params)?;
    }

    let mut grad = vec![0.0; params.len()];
    for (op_index, prefix) in prefixes {
        let Operation::Rotation {
            qubit,
            axis,
            parameter,
        } = ops[op_index]
        else {
            unreachable!("prefixes only record rotations")
        };
        let shifted = |shift: f64| -> Result<f64> {
            let mut s = prefix.clone();
            s.apply_single_qubit(&rotation_gate(axis, params[parameter] + shift), qubit)?;
            for op in &ops[op_index + 1..] {
                op.apply(&mut s, params)?;
            }
            s.expectation_zz(0, 1)
        };
        grad[parameter] = 0.5 * (shifted(FRAC_PI_2)? - shifted(-FRAC_PI_2)?);
    }
    Ok(grad)
}

/// First-order optimizer acting on a flat parameter slice.
#[derive(Debug, Clone)]
pub struct Optimizer {
    kind: OptimizerKind,
    learning_rate: f64,
    first_moment: Vec<f64>,
    second_moment: Vec<f64>,
    steps: i32,
}

impl Optimizer {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPSILON: f64 = 1e-8;

    pub fn new(kind: OptimizerKind, learning_rate: f64, size: usize) -> Self {
        Self {
            kind,
            learning_rate,
            first_moment: vec![0.0; size],
            second_moment: vec![0.0; size],
            steps: 0,
        }
    }

    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) {
        debug_assert_eq!(params.len(), grads.len());
        match self.kind {
            OptimizerKind::Gd => {
                for (p, g) in params.iter_mut().zip(grads) {
                    *p -= self.learning_rate * g;
                }
            }
            OptimizerKind::Adam => {
                self.steps += 1;
                let c1 = 1.0 - Self::BETA1.powi(self.steps);
                let c2 = 1.0 - Self::BETA2.powi(self.steps);
                for (i, (p, &g)) in params.iter_mut().zip(grads).enumerate() {
                    let m = &mut self.first_moment[i];
                    let v = &mut self.second_moment[i];
                    *m = Self::BETA1 * *m + (1.0 - Self::BETA1) * g;
                    *v = Self::BETA2 * *v + (1.0 - Self::BETA2) * g * g;
                    *p -= self.learning_rate * (*m / c1) / ((*v / c2).sqrt() + Self::EPSILON);
                }
            }
        }
    }
}

/// Trains the circuit angles directly from a uniform start in `[-π, π]`.
pub fn train_direct(config: &TrainConfig) -> Result<ParameterTrajectory> {
    config.validate()?;
    if config.mode != Mode::Direct {
        return Err(Error::config("train_direct needs mode = direct"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let m = config.ansatz.parameter_count();
    let mut params: Vec<f64> = (0..m).map(|_| rng.random_range(-PI..=PI)).collect();
    let mut optimizer = Optimizer::new(config.optimizer, config.learning_rate, m);

    let mut rows = Vec::with_capacity(config.iterations + 1);
    rows.push(params.clone());
    for _ in 0..config.iterations {
        let grad = parameter_shift_grad(&params, &config.ansatz)?;
        optimizer.step(&mut params, &grad);
        rows.push(params.clone());
    }
    Ok(ParameterTrajectory::from_rows(rows)?.with_meta(config.meta()))
}

/// Trains the generator network; the recorded rows are the emitted angles.
pub fn train_nn(config: &TrainConfig) -> Result<ParameterTrajectory> {
    train_nn_with_weights(config).map(|(trajectory, _)| trajectory)
}

/// As [`train_nn`], also returning the final network weights.
pub fn train_nn_with_weights(
    config: &TrainConfig,
) -> Result<(ParameterTrajectory, NetworkWeights)> {
    config.validate()?;
    if config.mode != Mode::Nn {
        return Err(Error::config("train_nn needs mode = nn"));
    }
    let m = config.ansatz.parameter_count();
    let shape = config.network;
    let mut net = NetworkWeights::init(config.seed, shape.input_dim, shape.hidden_dim, m)?;
    let input = vec![1.0; shape.input_dim];
    let mut flat = net.flatten();
    let mut optimizer = Optimizer::new(config.optimizer, config.learning_rate, flat.len());

    let mut theta = net.forward(&input)?;
    let mut rows = Vec::with_capacity(config.iterations + 1);
    rows.push(theta.clone());
    for _ in 0..config.iterations {
        let upstream = parameter_shift_grad(&theta, &config.ansatz)?;
        let grads = net.backward(&input, &upstream)?.flatten();
        optimizer.step(&mut flat, &grads);
        net.set_flat(&flat)?;
        theta = net.forward(&input)?;
        rows.push(theta.clone());
    }
    let trajectory = ParameterTrajectory::from_rows(rows)?.with_meta(config.meta());
    Ok((trajectory, net))
}

/// Dispatches on `config.mode`.
pub fn train(config: &TrainConfig) -> Result<ParameterTrajectory> {
    match config.mode {
        Mode::Direct => train_direct(config),
        Mode::Nn => train_nn(config),
    }
}

/// Settings for [`gradient_variance_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceScan {
    pub samples: usize,
    pub seed: u64,
    /// Pool every gradient component instead of only `∂C/∂θ₀`.
    pub all_components: bool,
}

impl VarianceScan {
    pub const MIN_SAMPLES: usize = 30;
}

/// Population variance of the cost gradient over uniform random angles, per qubit count.
///
/// `template` builds the ansatz for each qubit count. Each qubit count draws
/// from its own ChaCha stream, so results do not depend on the range scanned.
pub fn gradient_variance_scan<F>(
    qubits: RangeInclusive<usize>,
    scan: &VarianceScan,
    template: F,
) -> Result<Vec<(usize, f64)>>
where
    F: Fn(usize) -> AnsatzConfig,
{
    if scan.samples < VarianceScan::MIN_SAMPLES {
        return Err(Error::config(format!(
            "variance scan needs at least {} samples, got {}",
            VarianceScan::MIN_SAMPLES,
            scan.samples
        )));
    }
    if qubits.is_empty() {
        return Err(Error::config("empty qubit range"));
    }
    qubits
        .map(|n| {
            let config = template(n);
            config.validate()?;
            let mut rng = ChaCha8Rng::seed_from_u64(scan.seed);
            rng.set_stream(n as u64);
            let m = config.parameter_count();
            let mut values = Vec::with_capacity(scan.samples);
            for _ in 0..scan.samples {
                let params: Vec<f64> = (0..m).map(|_| rng.random_range(-PI..=PI)).collect();
                if scan.all_components {
                    values.extend(parameter_shift_grad(&params, &config)?);
                } else {
                    values.push(first_component_grad(&params, &config)?);
                }
            }
            Ok((n, population_variance(&values)))
        })
        .collect()
}

fn first_component_grad(params: &[f64], config: &AnsatzConfig) -> Result<f64> {
    let mut shifted = params.to_vec();
    shifted[0] = params[0] + FRAC_PI_2;
    let plus = crate::sim::cost(&shifted, config)?;
    shifted[0] = params[0] - FRAC_PI_2;
    let minus = crate::sim::cost(&shifted, config)?;
    Ok(0.5 * (plus - minus))
}

pub(crate) fn population_variance(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n
}
