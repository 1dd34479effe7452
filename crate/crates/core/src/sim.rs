//! Dense n-qubit statevector simulation.
//!
//! Basis index bit `q` is the state of qubit `q`, so qubit 0 is the least
//! significant bit. The layered ansatz applies one rotation per qubit per layer
//! (parameters consumed layer-major), followed by a CNOT entangler.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{rotation_gate, Axis, GroupElement};

pub const MAX_QUBITS: usize = 12;

/// Normalized vector of `2^n` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    num_qubits: usize,
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            num_qubits,
        })
    }

    /// `|+⟩ = (|0⟩ + |1⟩)/√2` on one qubit.
    pub fn plus() -> Self {
        let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self {
            amplitudes: vec![a, a],
            num_qubits: 1,
        }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::config(format!(
                "amplitude count {len} is not a power of two ≥ 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_qubit_count(num_qubits)?;
        let state = Self {
            amplitudes,
            num_qubits,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies a 2×2 unitary to one tensor factor.
    pub fn apply_single_qubit(&mut self, gate: &GroupElement, qubit: usize) -> Result<()> {
        self.check_qubit(qubit)?;
        let m = gate.matrix();
        let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        let stride = 1usize << qubit;
        let real = m00.im == 0.0 && m01.im == 0.0 && m10.im == 0.0 && m11.im == 0.0;
        for block in self.amplitudes.chunks_exact_mut(stride << 1) {
            let (lo, hi) = block.split_at_mut(stride);
            if real {
                let (r00, r01, r10, r11) = (m00.re, m01.re, m10.re, m11.re);
                for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a0, *a1);
                    *a0 = x * r00 + y * r01;
                    *a1 = x * r10 + y * r11;
                }
            } else {
                for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a0, *a1);
                    *a0 = m00 * x + m01 * y;
                    *a1 = m10 * x + m11 * y;
                }
            }
        }
        Ok(())
    }

    /// Flips `target` on every basis state whose `control` bit is set.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::RepeatedQubit(control));
        }
        let (c, t) = (1usize << control, 1usize << target);
        for i in 0..self.amplitudes.len() {
            if i & c != 0 && i & t == 0 {
                self.amplitudes.swap(i, i | t);
            }
        }
        Ok(())
    }

    /// `⟨Z_{q0} Z_{q1}⟩`.
    pub fn expectation_zz(&self, q0: usize, q1: usize) -> Result<f64> {
        self.check_qubit(q0)?;
        self.check_qubit(q1)?;
        if q0 == q1 {
            return Err(Error::RepeatedQubit(q0));
        }
        let mask = (1usize << q0) | (1usize << q1);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let p = a.norm_sqr();
                if (i & mask).count_ones().is_multiple_of(2) {
                    p
                } else {
                    -p
                }
            })
            .sum())
    }

    /// `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)` of a single-qubit state.
    pub fn bloch_coordinates(&self) -> Result<(f64, f64, f64)> {
        if self.num_qubits != 1 {
            return Err(Error::NotSingleQubit(self.num_qubits));
        }
        let (a, b) = (self.amplitudes[0], self.amplitudes[1]);
        let cross = a.conj() * b;
        Ok((2.0 * cross.re, 2.0 * cross.im, a.norm_sqr() - b.norm_sqr()))
    }

    fn check_qubit(&self, index: usize) -> Result<()> {
        if index >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCountOutOfRange(n));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Entangler {
    /// CNOT(q, q+1) for every neighbouring pair, closed by CNOT(n-1, 0).
    RingCnot,
    /// CNOT(q, q+1) for every neighbouring pair.
    LineCnot,
}

impl fmt::Display for Entangler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Entangler::RingCnot => "ring-cnot",
            Entangler::LineCnot => "line-cnot",
        })
    }
}

impl FromStr for Entangler {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ring" | "ring-cnot" => Ok(Entangler::RingCnot),
            "line" | "line-cnot" => Ok(Entangler::LineCnot),
            other => Err(format!(
                "unknown entangler '{other}', expected ring or line"
            )),
        }
    }
}

/// Layered hardware-efficient circuit template.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzConfig {
    pub num_qubits: usize,
    pub num_layers: usize,
    /// Rotation axis used by every qubit of the corresponding layer.
    pub rotation_axes: Vec<Axis>,
    pub entangler: Entangler,
}

impl AnsatzConfig {
    /// `n` qubits, `n` layers of Ry rotations, ring-CNOT entangler.
    pub fn hardware_efficient(num_qubits: usize) -> Self {
        Self::uniform(num_qubits, num_qubits, Axis::Y, Entangler::RingCnot)
    }

    pub fn uniform(num_qubits: usize, num_layers: usize, axis: Axis, entangler: Entangler) -> Self {
        Self {
            num_qubits,
            num_layers,
            rotation_axes: vec![axis; num_layers],
            entangler,
        }
    }

    pub fn parameter_count(&self) -> usize {
        self.num_qubits * self.num_layers
    }

    pub fn validate(&self) -> Result<()> {
        check_qubit_count(self.num_qubits)?;
        if self.num_layers == 0 {
            return Err(Error::config("ansatz needs at least one layer"));
        }
        if self.rotation_axes.len() != self.num_layers {
            return Err(Error::config(format!(
                "axis schedule has {} entries for {} layers",
                self.rotation_axes.len(),
                self.num_layers
            )));
        }
        Ok(())
    }

    /// Control/target pairs of one entangling block, in application order.
    pub fn entangling_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.num_qubits;
        if n < 2 {
            return Vec::new();
        }
        let mut pairs: Vec<_> = (0..n - 1).map(|q| (q, q + 1)).collect();
        if self.entangler == Entangler::RingCnot {
            pairs.push((n - 1, 0));
        }
        pairs
    }

    /// Flattened gate sequence; rotation `k` reads parameter `k`.
    pub fn operations(&self) -> Vec<Operation> {
        let pairs = self.entangling_pairs();
        let mut ops = Vec::with_capacity(self.num_layers * (self.num_qubits + pairs.len()));
        for (layer, &axis) in self.rotation_axes.iter().enumerate() {
            for qubit in 0..self.num_qubits {
                ops.push(Operation::Rotation {
                    qubit,
                    axis,
                    parameter: layer * self.num_qubits + qubit,
                });
            }
            ops.extend(
                pairs
                    .iter()
                    .map(|&(control, target)| Operation::Cnot { control, target }),
            );
        }
        ops
    }

    pub(crate) fn check_params(&self, params: &[f64]) -> Result<()> {
        self.validate()?;
        if params.len() != self.parameter_count() {
            return Err(Error::DimensionMismatch {
                expected: self.parameter_count(),
                actual: params.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operation {
    Rotation {
        qubit: usize,
        axis: Axis,
        parameter: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Operation {
    pub(crate) fn apply(&self, state: &mut StateVector, params: &[f64]) -> Result<()> {
        match *self {
            Operation::Rotation {
                qubit,
                axis,
                parameter,
            } => state.apply_single_qubit(&rotation_gate(axis, params[parameter]), qubit),
            Operation::Cnot { control, target } => state.apply_cnot(control, target),
        }
    }
}

/// Runs the ansatz on `|0…0⟩`.
pub fn apply_ansatz(params: &[f64], config: &AnsatzConfig) -> Result<StateVector> {
    config.check_params(params)?;
    let mut state = StateVector::zero(config.num_qubits)?;
    for op in config.operations() {
        op.apply(&mut state, params)?;
    }
    Ok(state)
}

/// Cost observable `⟨Z₀Z₁⟩` of the ansatz output.
pub fn cost(params: &[f64], config: &AnsatzConfig) -> Result<f64> {
    if config.num_qubits < 2 {
        return Err(Error::config("the ZZ cost needs at least two qubits"));
    }
    apply_ansatz(params, config)?.expectation_zz(0, 1)
}

/// Starting state for a Bloch-sphere sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartState {
    Zero,
    Plus,
}

impl FromStr for StartState {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zero" | "0" => Ok(StartState::Zero),
            "plus" | "+" => Ok(StartState::Plus),
            other => Err(format!(
                "unknown start state '{other}', expected zero or plus"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Bloch vectors of `R_axis(θ)|start⟩` for `samples` angles evenly spaced over `[0, 2π]`.
pub fn bloch_sweep(axis: Axis, start: StartState, samples: usize) -> Result<Vec<BlochSample>> {
    if samples < 2 {
        return Err(Error::config("a Bloch sweep needs at least 2 samples"));
    }
    let initial = match start {
        StartState::Zero => StateVector::zero(1)?,
        StartState::Plus => StateVector::plus(),
    };
    (0..samples)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / (samples - 1) as f64;
            let mut state = initial.clone();
            state.apply_single_qubit(&rotation_gate(axis, t), 0)?;
            let (x, y, z) = state.bloch_coordinates()?;
            Ok(BlochSample { t, x, y, z })
        })
        .collect()
}
