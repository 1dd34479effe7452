use std::path::{Path, PathBuf};

use geogate_core::analysis::{
    analyze as analyze_trace, default_stride, geodesic_deviation, group_map_series,
    normalize_trace, AnalysisOptions, Normalization, TrajectoryMetrics,
};
use geogate_core::io::{
    bloch_csv, group_map_csv, kinematics_csv, load_trajectory, read_json, save_trajectory,
    variance_csv, write_json, write_text,
};
use geogate_core::lie::Axis;
use geogate_core::report::{compare_arms, comparison_csv, comparison_text};
use geogate_core::sim::{bloch_sweep, AnsatzConfig};
use geogate_core::train::{
    gradient_variance_scan, train as train_run, train_nn_with_weights, Mode, NetworkShape,
    ParameterTrajectory, TrainConfig, VarianceScan,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{
    AnalyzeArgs, BlochArgs, CompareArgs, DeviationArgs, GroupmapArgs, KinematicsArgs, NormalizeArg,
    PlateauArgs, Stride, TrainArgs,
};
use crate::manifest;
use crate::{CmdResult, Failure};

pub fn train_config(a: &TrainArgs) -> TrainConfig {
    let mode = Mode::from(a.mode);
    let layers = a.layers.unwrap_or(a.qubits);
    let ansatz = AnsatzConfig::uniform(a.qubits, layers, a.axis.into(), a.entangler.into());
    let mut config = TrainConfig::new(ansatz, mode, a.seed.seed);
    config.iterations = a.iters;
    config.learning_rate = a.lr.unwrap_or(TrainConfig::default_learning_rate(mode));
    config.optimizer = a.optimizer.into();
    config.network = NetworkShape {
        input_dim: a.input_dim,
        hidden_dim: a.hidden,
    };
    config
}

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("configuration types serialize")
}

pub fn train(a: &TrainArgs, argv: &[String]) -> CmdResult {
    let config = train_config(a);
    let mut outputs = Vec::new();
    let trajectory = match (&a.save_weights, config.mode) {
        (Some(path), Mode::Nn) => {
            let (trajectory, weights) = train_nn_with_weights(&config)?;
            write_json(path, &weights.snapshot())?;
            outputs.push(path.clone());
            trajectory
        }
        (Some(_), Mode::Direct) => {
            return Err(Failure::usage("--save-weights needs --mode nn"));
        }
        (None, _) => train_run(&config)?,
    };
    outputs.splice(0..0, save_trajectory(&a.out, &trajectory)?);
    manifest::record(
        argv,
        "train",
        Some(config.seed),
        to_json(&config),
        &outputs,
        &a.out,
    )?;
    Ok(())
}

/// Loads a trace and applies the requested normalization.
fn load(trace: &Path, normalize: NormalizeArg) -> CmdResult<ParameterTrajectory> {
    let traj = load_trajectory(trace)?;
    if Normalization::from(normalize).resolve(&traj)? {
        Ok(normalize_trace(&traj)?)
    } else {
        Ok(traj)
    }
}

/// Writes `text` to `out` (with a manifest) or to stdout.
fn emit(
    text: &str,
    out: Option<&PathBuf>,
    argv: &[String],
    command: &str,
    seed: Option<u64>,
    config: serde_json::Value,
) -> CmdResult {
    match out {
        Some(path) => {
            write_text(path, text)?;
            manifest::record(
                argv,
                command,
                seed,
                config,
                std::slice::from_ref(path),
                path,
            )?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

pub fn analyze(a: &AnalyzeArgs, argv: &[String]) -> CmdResult {
    let traj = load_trajectory(&a.trace)?;
    let options = AnalysisOptions {
        delta_t: a.dt,
        normalize: Normalization::from(a.normalize).resolve(&traj)?,
        absolute: !a.signed,
        std_convention: a.std.into(),
    };
    let metrics = analyze_trace(&traj, &options)?;
    write_json(&a.out, &metrics)?;
    let config = json!({
        "trace": a.trace,
        "delta_t": a.dt,
        "normalize": options.normalize,
        "absolute": options.absolute,
        "std_convention": options.std_convention,
    });
    manifest::record(
        argv,
        "analyze",
        None,
        config,
        std::slice::from_ref(&a.out),
        &a.out,
    )?;
    Ok(())
}

pub fn groupmap(a: &GroupmapArgs, argv: &[String]) -> CmdResult {
    let traj = load(&a.trace, a.normalize)?;
    let stride = match a.stride {
        Stride::Fixed(k) => k,
        Stride::Auto => match &traj.meta {
            Some(meta) => default_stride(meta.num_qubits),
            None => {
                return Err(Failure::usage(
                    "--stride auto needs the trace's sidecar; pass an explicit stride",
                ))
            }
        },
    };
    let series = group_map_series(&traj, a.column, a.axis.into(), stride)?;
    let config = json!({
        "trace": a.trace,
        "column": a.column,
        "axis": Axis::from(a.axis),
        "stride": stride,
        "normalized": traj.normalized,
    });
    emit(
        &group_map_csv(&series),
        a.out.as_ref(),
        argv,
        "groupmap",
        None,
        config,
    )
}

pub fn kinematics(a: &KinematicsArgs, argv: &[String]) -> CmdResult {
    let traj = load(&a.trace, a.normalize)?;
    let text = kinematics_csv(&traj.column(a.column)?, a.dt)?;
    let config = json!({
        "trace": a.trace,
        "column": a.column,
        "delta_t": a.dt,
        "normalized": traj.normalized,
    });
    emit(&text, a.out.as_ref(), argv, "kinematics", None, config)
}

#[derive(Debug, Serialize)]
struct DeviationReport {
    trace: PathBuf,
    axis: Axis,
    normalized: bool,
    columns: Vec<ColumnDeviation>,
    mean: f64,
}

#[derive(Debug, Serialize)]
struct ColumnDeviation {
    column: usize,
    deviation: f64,
}

pub fn deviation(a: &DeviationArgs, argv: &[String]) -> CmdResult {
    let traj = load(&a.trace, a.normalize)?;
    let axis = Axis::from(a.axis);
    let columns: Vec<usize> = if a.column.is_empty() {
        (0..traj.parameter_count()).collect()
    } else {
        a.column.clone()
    };
    let columns = columns
        .into_iter()
        .map(|column| {
            Ok(ColumnDeviation {
                column,
                deviation: geodesic_deviation(&traj, column, axis)?,
            })
        })
        .collect::<CmdResult<Vec<_>>>()?;
    let mean = columns.iter().map(|c| c.deviation).sum::<f64>() / columns.len() as f64;
    let report = DeviationReport {
        trace: a.trace.clone(),
        axis,
        normalized: traj.normalized,
        columns,
        mean,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    let config = json!({ "trace": a.trace, "axis": axis, "normalized": traj.normalized });
    emit(&text, a.out.as_ref(), argv, "deviation", None, config)
}

pub fn bloch(a: &BlochArgs, argv: &[String]) -> CmdResult {
    let axis = Axis::from(a.gate);
    let samples = bloch_sweep(axis, a.state.into(), a.samples)?;
    let config = json!({
        "axis": axis,
        "state": geogate_core::sim::StartState::from(a.state),
        "samples": a.samples,
    });
    emit(
        &bloch_csv(&samples),
        a.out.as_ref(),
        argv,
        "bloch",
        None,
        config,
    )
}

pub fn plateau(a: &PlateauArgs, argv: &[String]) -> CmdResult {
    let scan = VarianceScan {
        samples: a.samples,
        seed: a.seed.seed,
        all_components: a.all_components,
    };
    let rows = gradient_variance_scan(a.qubits.clone(), &scan, AnsatzConfig::hardware_efficient)?;
    let config = json!({
        "qubits": [a.qubits.start(), a.qubits.end()],
        "samples": a.samples,
        "all_components": a.all_components,
        "ansatz": "hardware-efficient",
    });
    emit(
        &variance_csv(&rows),
        a.out.as_ref(),
        argv,
        "plateau",
        Some(a.seed.seed),
        config,
    )
}

fn read_metrics(paths: &[PathBuf]) -> CmdResult<Vec<TrajectoryMetrics>> {
    paths
        .iter()
        .map(|p| read_json(p).map_err(Failure::from))
        .collect()
}

pub fn compare(a: &CompareArgs, argv: &[String]) -> CmdResult {
    let rows = compare_arms(&read_metrics(&a.with_nn)?, &read_metrics(&a.without_nn)?)?;
    print!("{}", comparison_text(&rows));
    if let Some(out) = &a.out {
        write_text(out, &comparison_csv(&rows))?;
        let config = json!({ "with": a.with_nn, "without": a.without_nn });
        manifest::record(
            argv,
            "compare",
            None,
            config,
            std::slice::from_ref(out),
            out,
        )?;
    }
    Ok(())
}
