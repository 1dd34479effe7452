//! Small tanh MLP that emits circuit angles.
//!
//! Hidden layers use `tanh`; the output layer uses `π·tanh`, so every emitted
//! angle lies strictly inside `(-π, π)`. Backpropagation takes `dC/dθ` from the
//! circuit side and returns exact gradients for every weight and bias.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weight matrix (`fan_out × fan_in`) and bias vector of one dense layer.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    pub weights: DMatrix<f64>,
    pub bias: DVector<f64>,
}

impl DenseLayer {
    pub fn fan_in(&self) -> usize {
        self.weights.ncols()
    }

    pub fn fan_out(&self) -> usize {
        self.weights.nrows()
    }

    fn zeros_like(&self) -> Self {
        Self {
            weights: DMatrix::zeros(self.fan_out(), self.fan_in()),
            bias: DVector::zeros(self.fan_out()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkWeights {
    layers: Vec<DenseLayer>,
}

/// Gradients with the same layout as [`NetworkWeights`].
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkGradients {
    pub layers: Vec<DenseLayer>,
}

impl NetworkGradients {
    pub fn flatten(&self) -> Vec<f64> {
        flatten_layers(&self.layers)
    }
}

impl NetworkWeights {
    /// Two-layer network with weights uniform in `±1/√fan_in` and zero biases.
    pub fn init(seed: u64, input_dim: usize, hidden_dim: usize, output_dim: usize) -> Result<Self> {
        if input_dim == 0 || hidden_dim == 0 || output_dim == 0 {
            return Err(Error::config("network dimensions must be at least 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut layer = |fan_in: usize, fan_out: usize| {
            let bound = 1.0 / (fan_in as f64).sqrt();
            // row-major draw order, independent of nalgebra's storage order
            let weights = DMatrix::from_row_iterator(
                fan_out,
                fan_in,
                (0..fan_in * fan_out).map(|_| rng.random_range(-bound..=bound)),
            );
            DenseLayer {
                weights,
                bias: DVector::zeros(fan_out),
            }
        };
        let hidden = layer(input_dim, hidden_dim);
        let output = layer(hidden_dim, output_dim);
        Self::from_layers(vec![hidden, output])
    }

    pub fn from_layers(layers: Vec<DenseLayer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::config("network needs at least one layer"));
        }
        for (i, l) in layers.iter().enumerate() {
            if l.fan_in() == 0 || l.fan_out() == 0 {
                return Err(Error::config(format!("layer {i} has a zero dimension")));
            }
            if l.bias.len() != l.fan_out() {
                return Err(Error::config(format!(
                    "layer {i}: bias length {} does not match fan_out {}",
                    l.bias.len(),
                    l.fan_out()
                )));
            }
        }
        for (i, pair) in layers.windows(2).enumerate() {
            if pair[0].fan_out() != pair[1].fan_in() {
                return Err(Error::config(format!(
                    "layer {} emits {} values but layer {} expects {}",
                    i,
                    pair[0].fan_out(),
                    i + 1,
                    pair[1].fan_in()
                )));
            }
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].fan_in()
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].fan_out()
    }

    pub fn parameter_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.bias.len())
            .sum()
    }

    /// `θ = π·tanh(W_L ⋯ tanh(W_1 x + b_1) ⋯ + b_L)`.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        let (activations, _) = self.forward_trace(input)?;
        let last = activations.last().expect("at least one layer");
        Ok(last.iter().map(|&t| PI * t).collect())
    }

    /// Per-layer `tanh` outputs (index 0 is the input itself) plus the input vector.
    fn forward_trace(&self, input: &[f64]) -> Result<(Vec<DVector<f64>>, DVector<f64>)> {
        if input.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                actual: input.len(),
            });
        }
        let x = DVector::from_column_slice(input);
        let mut activations = Vec::with_capacity(self.layers.len());
        let mut current = x.clone();
        for layer in &self.layers {
            let z = &layer.weights * &current + &layer.bias;
            current = z.map(f64::tanh);
            activations.push(current.clone());
        }
        Ok((activations, x))
    }

    /// Chain rule from `dC/dθ` back to every weight and bias.
    pub fn backward(&self, input: &[f64], upstream: &[f64]) -> Result<NetworkGradients> {
        if upstream.len() != self.output_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.output_dim(),
                actual: upstream.len(),
            });
        }
        let (activations, x) = self.forward_trace(input)?;
        let mut grads: Vec<DenseLayer> = self.layers.iter().map(DenseLayer::zeros_like).collect();

        // δ = dC/dz for the current layer; θ = π tanh(z) at the output.
        let out = activations.last().expect("at least one layer");
        let mut delta = DVector::from_iterator(
            out.len(),
            out.iter()
                .zip(upstream)
                .map(|(&t, &g)| g * PI * (1.0 - t * t)),
        );
        for l in (0..self.layers.len()).rev() {
            let prev = if l == 0 { &x } else { &activations[l - 1] };
            grads[l].weights = &delta * prev.transpose();
            grads[l].bias = delta.clone();
            if l > 0 {
                let back = self.layers[l].weights.transpose() * &delta;
                delta = back.zip_map(prev, |d, a| d * (1.0 - a * a));
            }
        }
        Ok(NetworkGradients { layers: grads })
    }

    /// All parameters, layer by layer, weights row-major then bias.
    pub fn flatten(&self) -> Vec<f64> {
        flatten_layers(&self.layers)
    }

    /// Inverse of [`flatten`](Self::flatten).
    pub fn set_flat(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.parameter_count() {
            return Err(Error::DimensionMismatch {
                expected: self.parameter_count(),
                actual: values.len(),
            });
        }
        let mut it = values.iter().copied();
        for layer in &mut self.layers {
            let (rows, cols) = layer.weights.shape();
            for r in 0..rows {
                for c in 0..cols {
                    layer.weights[(r, c)] = it.next().expect("length checked");
                }
            }
            for b in layer.bias.iter_mut() {
                *b = it.next().expect("length checked");
            }
        }
        Ok(())
    }

    pub fn snapshot(&self) -> WeightSnapshot {
        WeightSnapshot {
            layers: self
                .layers
                .iter()
                .map(|l| LayerSnapshot {
                    weights: l
                        .weights
                        .row_iter()
                        .map(|r| r.iter().copied().collect())
                        .collect(),
                    bias: l.bias.iter().copied().collect(),
                })
                .collect(),
        }
    }

    pub fn from_snapshot(snapshot: &WeightSnapshot) -> Result<Self> {
        let layers = snapshot
            .layers
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let rows = l.weights.len();
                let cols = l.weights.first().map_or(0, Vec::len);
                if l.weights.iter().any(|r| r.len() != cols) {
                    return Err(Error::config(format!("layer {i}: ragged weight rows")));
                }
                Ok(DenseLayer {
                    weights: DMatrix::from_row_iterator(
                        rows,
                        cols,
                        l.weights.iter().flatten().copied(),
                    ),
                    bias: DVector::from_vec(l.bias.clone()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_layers(layers)
    }
}

fn flatten_layers(layers: &[DenseLayer]) -> Vec<f64> {
    let mut out = Vec::new();
    for l in layers {
        for row in l.weights.row_iter() {
            out.extend(row.iter());
        }
        out.extend(l.bias.iter());
    }
    out
}

/// JSON form of the weights: per layer, row-major matrix rows and the bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSnapshot {
    pub layers: Vec<LayerSnapshot>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerSnapshot {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}
