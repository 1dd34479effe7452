//! Geometric diagnostics for recorded angle trajectories.
//!
//! Velocities and accelerations use central differences with an integer index
//! offset `delta_t`; points without both neighbours are dropped. Per-column
//! statistics are averaged arithmetically into the headline numbers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{exp_map, log_map, AlgebraElement, Axis};
use crate::train::{Mode, ParameterTrajectory};

pub const DEFAULT_DELTA_T: usize = 5;

/// Maps every column affinely onto `[-1, 1]` (min → -1, max → +1).
/// Constant columns become all zeros.
pub fn normalize_trace(traj: &ParameterTrajectory) -> Result<ParameterTrajectory> {
    if traj.len() < 2 {
        return Err(Error::SeriesTooShort {
            required: 1,
            actual: traj.len(),
        });
    }
    let columns: Vec<Vec<f64>> = traj.columns().iter().map(|c| normalize_column(c)).collect();
    let mut out = traj.with_columns(&columns);
    out.normalized = true;
    Ok(out)
}

fn normalize_column(column: &[f64]) -> Vec<f64> {
    let (lo, hi) = column
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if lo == hi {
        return vec![0.0; column.len()];
    }
    let span = hi - lo;
    column
        .iter()
        .map(|&v| {
            // endpoints exact, so a normalized column maps onto itself
            if v == lo {
                -1.0
            } else if v == hi {
                1.0
            } else {
                // exact when (lo, hi) = (-1, 1)
                (2.0 * v - (lo + hi)) / span
            }
        })
        .collect()
}

/// `v_k = (θ_{k+δ} - θ_{k-δ}) / 2δ` for every `k` with both neighbours.
pub fn central_velocity(series: &[f64], delta_t: usize) -> Result<Vec<f64>> {
    if delta_t == 0 {
        return Err(Error::config("delta_t must be at least 1"));
    }
    if series.len() <= 2 * delta_t {
        return Err(Error::SeriesTooShort {
            required: 2 * delta_t,
            actual: series.len(),
        });
    }
    let denom = 2.0 * delta_t as f64;
    Ok((delta_t..series.len() - delta_t)
        .map(|k| (series[k + delta_t] - series[k - delta_t]) / denom)
        .collect())
}

/// Central difference of a velocity sequence; same contract as [`central_velocity`].
pub fn central_acceleration(velocity: &[f64], delta_t: usize) -> Result<Vec<f64>> {
    central_velocity(velocity, delta_t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StdConvention {
    /// Divide by `n`.
    #[default]
    Population,
    /// Divide by `n - 1`.
    Sample,
}

/// Relative standard deviation `σ/μ` in percent (population σ).
pub fn rsd(series: &[f64]) -> Result<f64> {
    rsd_with(series, StdConvention::Population)
}

pub fn rsd_with(series: &[f64], convention: StdConvention) -> Result<f64> {
    let n = series.len();
    let min_len = match convention {
        StdConvention::Population => 1,
        StdConvention::Sample => 2,
    };
    if n < min_len {
        return Err(Error::SeriesTooShort {
            required: min_len - 1,
            actual: n,
        });
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    if mean.abs() <= 1e-300 {
        return Err(Error::ZeroMean);
    }
    let ss: f64 = series.iter().map(|v| (v - mean).powi(2)).sum();
    let denom = match convention {
        StdConvention::Population => n as f64,
        StdConvention::Sample => (n - 1) as f64,
    };
    Ok(100.0 * (ss / denom).sqrt() / mean)
}

/// `E = Σθ²/n` and `L = Σ|θ_{i+1} - θ_i|`.
pub fn energy_and_length(series: &[f64]) -> Result<(f64, f64)> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort {
            required: 1,
            actual: series.len(),
        });
    }
    let energy = series.iter().map(|v| v * v).sum::<f64>() / series.len() as f64;
    let length = series.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    Ok((energy, length))
}

/// When to apply [`normalize_trace`] inside [`analyze`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Normalize direct-mode trajectories only.
    #[default]
    Auto,
    On,
    Off,
}

impl std::str::FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "auto" => Ok(Normalization::Auto),
            "on" | "true" => Ok(Normalization::On),
            "off" | "false" => Ok(Normalization::Off),
            other => Err(format!(
                "unknown normalization '{other}', expected auto, on or off"
            )),
        }
    }
}

impl Normalization {
    /// Resolves `Auto` against the trajectory's mode; `Auto` needs metadata.
    pub fn resolve(self, traj: &ParameterTrajectory) -> Result<bool> {
        match self {
            Normalization::On => Ok(true),
            Normalization::Off => Ok(false),
            Normalization::Auto => match &traj.meta {
                Some(meta) => Ok(meta.mode == Mode::Direct),
                None => Err(Error::config(
                    "normalization 'auto' needs the trajectory's run metadata",
                )),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub delta_t: usize,
    pub normalize: bool,
    /// Take statistics over `|v|`, `|a|` rather than signed values.
    pub absolute: bool,
    pub std_convention: StdConvention,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            delta_t: DEFAULT_DELTA_T,
            normalize: false,
            absolute: true,
            std_convention: StdConvention::Population,
        }
    }
}

/// The six trajectory statistics for one parameter column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnMetrics {
    pub v_bar: f64,
    pub a_bar: f64,
    pub energy: f64,
    pub length: f64,
    /// `None` when the velocity statistic has zero mean.
    #[serde(rename = "tau_v_percent")]
    pub tau_v: Option<f64>,
    #[serde(rename = "tau_a_percent")]
    pub tau_a: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMetrics {
    pub v_bar: f64,
    pub a_bar: f64,
    pub energy: f64,
    pub length: f64,
    #[serde(rename = "tau_v_percent")]
    pub tau_v: Option<f64>,
    #[serde(rename = "tau_a_percent")]
    pub tau_a: Option<f64>,
    pub delta_t: usize,
    pub normalized: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_qubits: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub per_parameter: Vec<ColumnMetrics>,
}

/// Per-column velocity, acceleration, RSD, energy and length, plus their means.
pub fn analyze(traj: &ParameterTrajectory, options: &AnalysisOptions) -> Result<TrajectoryMetrics> {
    let dt = options.delta_t;
    if dt == 0 {
        return Err(Error::config("delta_t must be at least 1"));
    }
    if traj.len() <= 4 * dt {
        return Err(Error::SeriesTooShort {
            required: 4 * dt,
            actual: traj.len(),
        });
    }
    let working = if options.normalize {
        normalize_trace(traj)?
    } else {
        traj.clone()
    };

    let per_parameter = working
        .columns()
        .iter()
        .map(|column| column_metrics(column, options))
        .collect::<Result<Vec<_>>>()?;

    let mean = |f: fn(&ColumnMetrics) -> f64| {
        per_parameter.iter().map(f).sum::<f64>() / per_parameter.len() as f64
    };
    let mean_defined = |f: fn(&ColumnMetrics) -> Option<f64>| {
        let defined: Vec<f64> = per_parameter.iter().filter_map(f).collect();
        (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64)
    };

    Ok(TrajectoryMetrics {
        v_bar: mean(|c| c.v_bar),
        a_bar: mean(|c| c.a_bar),
        energy: mean(|c| c.energy),
        length: mean(|c| c.length),
        tau_v: mean_defined(|c| c.tau_v),
        tau_a: mean_defined(|c| c.tau_a),
        delta_t: dt,
        normalized: working.normalized,
        mode: traj.meta.as_ref().map(|m| m.mode),
        num_qubits: traj.meta.as_ref().map(|m| m.num_qubits),
        seed: traj.meta.as_ref().map(|m| m.seed),
        per_parameter,
    })
}

fn column_metrics(column: &[f64], options: &AnalysisOptions) -> Result<ColumnMetrics> {
    let velocity = central_velocity(column, options.delta_t)?;
    let acceleration = central_acceleration(&velocity, options.delta_t)?;
    let prepare = |xs: Vec<f64>| {
        if options.absolute {
            xs.into_iter().map(f64::abs).collect()
        } else {
            xs
        }
    };
    let v = prepare(velocity);
    let a = prepare(acceleration);
    let (energy, length) = energy_and_length(column)?;
    let tau = |xs: &[f64]| match rsd_with(xs, options.std_convention) {
        Ok(t) => Ok(Some(t)),
        Err(Error::ZeroMean) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(ColumnMetrics {
        v_bar: v.iter().sum::<f64>() / v.len() as f64,
        a_bar: a.iter().sum::<f64>() / a.len() as f64,
        energy,
        length,
        tau_v: tau(&v)?,
        tau_a: tau(&a)?,
    })
}

/// Sampled scalar view of one parameter lifted into SU(2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupMapSeries {
    /// `(iteration k, y)` pairs.
    pub samples: Vec<(usize, f64)>,
    pub generator_axis: Axis,
    pub stride: usize,
}

/// Samples column `column` every `stride` iterations and reports
/// `y = Re tr(exp(θ · iP)) / 2`, which is `cos θ`.
pub fn group_map_series(
    traj: &ParameterTrajectory,
    column: usize,
    axis: Axis,
    stride: usize,
) -> Result<GroupMapSeries> {
    if stride == 0 {
        return Err(Error::config("stride must be at least 1"));
    }
    let values = traj.column(column)?;
    let samples = values
        .iter()
        .enumerate()
        .step_by(stride)
        .map(|(k, &theta)| {
            let u = exp_map(&AlgebraElement::along(axis, theta));
            (k, (0.5 * u.trace().re).clamp(-1.0, 1.0))
        })
        .collect();
    Ok(GroupMapSeries {
        samples,
        generator_axis: axis,
        stride,
    })
}

/// Plotting stride per qubit count: 5 for 4–5 qubits, 10 for 6–7, 20 for 8, 25 for 9.
/// Smaller systems use 5 and larger ones 25.
pub fn default_stride(num_qubits: usize) -> usize {
    match num_qubits {
        0..=5 => 5,
        6 | 7 => 10,
        8 => 20,
        _ => 25,
    }
}

/// Spread of the discrete group velocities of a lifted column.
///
/// Each `θ_k` becomes `U_k = exp(θ_k · iP)`; the step velocities are
/// `w_k = log(U_k⁻¹ U_{k+1})` and the result is the population standard
/// deviation of their Killing norms. A uniformly sampled geodesic scores 0.
pub fn geodesic_deviation(traj: &ParameterTrajectory, column: usize, axis: Axis) -> Result<f64> {
    let values = traj.column(column)?;
    if values.len() < 3 {
        return Err(Error::SeriesTooShort {
            required: 2,
            actual: values.len(),
        });
    }
    let lifted: Vec<_> = values
        .iter()
        .map(|&theta| exp_map(&AlgebraElement::along(axis, theta)))
        .collect();
    let norms = lifted
        .windows(2)
        .map(|w| Ok(log_map(&(w[0].inverse() * w[1]))?.killing_norm()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(crate::train::population_variance(&norms).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn traj(columns: &[&[f64]]) -> ParameterTrajectory {
        let n = columns[0].len();
        ParameterTrajectory::from_rows(
            (0..n)
                .map(|k| columns.iter().map(|c| c[k]).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn normalize_examples() {
        let t = traj(&[&[0.0, 5.0, 10.0], &[2.0, 2.0, 2.0]]);
        let n = normalize_trace(&t).unwrap();
        assert!(n.normalized);
        assert_eq!(n.column(0).unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(n.column(1).unwrap(), vec![0.0, 0.0, 0.0]);
        let fixed = traj(&[&[-1.0, 1.0]]);
        assert_eq!(
            normalize_trace(&fixed).unwrap().column(0).unwrap(),
            vec![-1.0, 1.0]
        );
        assert!(normalize_trace(&traj(&[&[1.0]])).is_err());
    }

    #[test]
    fn velocity_examples() {
        assert_eq!(
            central_velocity(&[0.0, 1.0, 2.0, 3.0, 4.0], 1).unwrap(),
            vec![1.0, 1.0, 1.0]
        );
        assert!(central_velocity(&[3.0; 9], 3)
            .unwrap()
            .iter()
            .all(|&v| v == 0.0));
        let squares: Vec<f64> = (0..10).map(|k| (k * k) as f64).collect();
        let v = central_velocity(&squares, 2).unwrap();
        // index k=5 sits at position k - δt
        assert_eq!(v[3], 10.0);
        assert!(central_velocity(&[1.0, 2.0], 1).is_err());
        assert!(central_velocity(&[1.0, 2.0, 3.0], 0).is_err());
    }

    #[test]
    fn acceleration_examples() {
        let ramp: Vec<f64> = (0..8).map(|k| k as f64).collect();
        let v = central_velocity(&ramp, 1).unwrap();
        assert!(central_acceleration(&v, 1)
            .unwrap()
            .iter()
            .all(|&a| a == 0.0));
        let squares: Vec<f64> = (0..8).map(|k| (k * k) as f64).collect();
        let v = central_velocity(&squares, 1).unwrap();
        assert!(central_acceleration(&v, 1)
            .unwrap()
            .iter()
            .all(|&a| a == 2.0));
        assert!(central_acceleration(&[1.0, 2.0], 1).is_err());
    }

    #[test]
    fn rsd_examples() {
        assert_eq!(rsd(&[1.0, 1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(rsd(&[1.0, 3.0]).unwrap(), 50.0);
        assert!(matches!(rsd(&[-1.0, 1.0]), Err(Error::ZeroMean)));
        // sample σ of [1,3] is √2
        let s = rsd_with(&[1.0, 3.0], StdConvention::Sample).unwrap();
        assert!((s - 100.0 * 2f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn energy_length_examples() {
        assert_eq!(energy_and_length(&[1.0; 4]).unwrap(), (1.0, 0.0));
        let (e, l) = energy_and_length(&[0.0, 1.0, 2.0]).unwrap();
        assert!((e - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(l, 2.0);
        assert_eq!(energy_and_length(&[1.0, -1.0, 1.0]).unwrap(), (1.0, 4.0));
        assert!(energy_and_length(&[1.0]).is_err());
    }

    #[test]
    fn analyze_constant_trace() {
        let t = traj(&[&[0.7; 30], &[-2.0; 30]]);
        let m = analyze(&t, &AnalysisOptions::default()).unwrap();
        assert_eq!((m.v_bar, m.a_bar, m.length), (0.0, 0.0, 0.0));
        assert!((m.per_parameter[0].energy - 0.49).abs() < 1e-15);
        assert_eq!(m.per_parameter[1].energy, 4.0);
        assert_eq!(m.tau_v, None);
        let normalized = analyze(
            &t,
            &AnalysisOptions {
                normalize: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(normalized.energy, 0.0);
        assert!(normalized.normalized);
    }

    #[test]
    fn analyze_rejects_short_trace() {
        let t = traj(&[&[0.0; 20]]);
        assert!(matches!(
            analyze(&t, &AnalysisOptions::default()),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn group_map_values_and_sampling() {
        let values: Vec<f64> = (0..40).map(|k| if k == 0 { 0.0 } else { PI }).collect();
        let t = traj(&[&values]);
        let g = group_map_series(&t, 0, Axis::Z, 5).unwrap();
        assert_eq!(
            g.samples.iter().map(|s| s.0).collect::<Vec<_>>(),
            vec![0, 5, 10, 15, 20, 25, 30, 35]
        );
        assert_eq!(g.samples[0].1, 1.0);
        assert!((g.samples[1].1 + 1.0).abs() < 1e-15);
        assert!(group_map_series(&t, 1, Axis::Z, 5).is_err());
        assert!(group_map_series(&t, 0, Axis::Z, 0).is_err());
    }

    #[test]
    fn default_strides() {
        assert_eq!(default_stride(9), 25);
        assert_eq!(default_stride(8), 20);
        assert_eq!(default_stride(6), 10);
        assert_eq!(default_stride(7), 10);
        assert_eq!(default_stride(4), 5);
        assert_eq!(default_stride(5), 5);
    }

    #[test]
    fn geodesic_deviation_linear_and_jump() {
        let linear: Vec<f64> = (0..50).map(|k| 0.3 + 0.02 * k as f64).collect();
        let t = traj(&[&linear]);
        assert!(geodesic_deviation(&t, 0, Axis::Y).unwrap() < 1e-10);
        let mut jumped = linear.clone();
        jumped[25] += 0.5;
        assert!(geodesic_deviation(&traj(&[&jumped]), 0, Axis::Y).unwrap() > 0.0);
    }

    #[test]
    fn geodesic_deviation_reports_branch_failure() {
        let t = traj(&[&[0.0, PI, 2.0 * PI]]);
        assert!(matches!(
            geodesic_deviation(&t, 0, Axis::X),
            Err(Error::LogBranchSingularity)
        ));
    }
}
