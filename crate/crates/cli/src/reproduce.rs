//! The full with/without-NN experiment in one command.
//!
//! Layout under `--out-dir`:
//!
//! ```text
//! traces/{mode}-n{N}-s{S}.csv    trajectory + .meta.json sidecar
//! metrics/{mode}-n{N}-s{S}.json  per-run metrics (direct runs normalized)
//! figures/groupmap-{mode}-n{N}.csv, figures/kinematics-{mode}-n{N}.csv
//! figures/bloch-{gate}-{state}.csv
//! plateau.csv                     gradient variance per qubit count
//! comparison.csv, comparison.txt  per-qubit medians of both arms
//! summary.json                    representative runs and orderings
//! ```
//!
//! The representative run of an arm is the median-by-length run (lower
//! median, ties broken by seed).

use std::fs;
use std::path::{Path, PathBuf};

use geogate_core::analysis::{
    analyze, default_stride, group_map_series, normalize_trace, AnalysisOptions, TrajectoryMetrics,
};
use geogate_core::io::{
    bloch_csv, group_map_csv, kinematics_csv, save_trajectory, variance_csv, write_json, write_text,
};
use geogate_core::lie::Axis;
use geogate_core::report::{compare_arms, comparison_csv, comparison_text, median, ComparisonRow};
use geogate_core::sim::{bloch_sweep, AnsatzConfig, StartState};
use geogate_core::train::{
    gradient_variance_scan, train, Mode, ParameterTrajectory, TrainConfig, VarianceScan,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::args::ReproduceArgs;
use crate::manifest;
use crate::{CmdResult, Failure};

const BLOCH_SAMPLES: usize = 101;
const GROUPMAP_COLUMN: usize = 0;

struct Run {
    mode: Mode,
    num_qubits: usize,
    seed: u64,
    trajectory: ParameterTrajectory,
    metrics: TrajectoryMetrics,
    files: Vec<PathBuf>,
}

#[derive(Debug, Serialize)]
struct ArmRecord {
    mode: Mode,
    num_qubits: usize,
    seeds: Vec<u64>,
    representative_seed: u64,
    median_energy: f64,
    median_length: f64,
}

#[derive(Debug, Serialize)]
struct Ordering {
    num_qubits: usize,
    energy_lower_with_nn: bool,
    length_lower_with_nn: bool,
}

#[derive(Debug, Serialize)]
struct Summary {
    iterations: usize,
    delta_t: usize,
    arms: Vec<ArmRecord>,
    comparison: Vec<ComparisonRow>,
    ordering: Vec<Ordering>,
}

fn mkdir(path: &Path) -> CmdResult {
    fs::create_dir_all(path)
        .map_err(|e| Failure::data(format!("cannot create {}: {e}", path.display())))
}

fn run_one(a: &ReproduceArgs, dirs: &Dirs, mode: Mode, n: usize, seed: u64) -> CmdResult<Run> {
    let mut config = TrainConfig::new(AnsatzConfig::hardware_efficient(n), mode, seed);
    config.iterations = a.iters;
    let trajectory = train(&config)?;
    let stem = format!("{mode}-n{n}-s{seed}");
    let mut files = save_trajectory(&dirs.traces.join(format!("{stem}.csv")), &trajectory)?;
    let options = AnalysisOptions {
        delta_t: a.dt,
        normalize: mode == Mode::Direct,
        ..AnalysisOptions::default()
    };
    let metrics = analyze(&trajectory, &options)?;
    let metrics_path = dirs.metrics.join(format!("{stem}.json"));
    write_json(&metrics_path, &metrics)?;
    files.push(metrics_path);
    Ok(Run {
        mode,
        num_qubits: n,
        seed,
        trajectory,
        metrics,
        files,
    })
}

struct Dirs {
    traces: PathBuf,
    metrics: PathBuf,
    figures: PathBuf,
}

/// Figure data for the representative run of one arm.
fn figure_files(dirs: &Dirs, run: &Run, dt: usize) -> CmdResult<Vec<PathBuf>> {
    let traj = if run.mode == Mode::Direct {
        normalize_trace(&run.trajectory)?
    } else {
        run.trajectory.clone()
    };
    let tag = format!("{}-n{}", run.mode, run.num_qubits);
    let series = group_map_series(
        &traj,
        GROUPMAP_COLUMN,
        Axis::Y,
        default_stride(run.num_qubits),
    )?;
    let groupmap = dirs.figures.join(format!("groupmap-{tag}.csv"));
    write_text(&groupmap, &group_map_csv(&series))?;
    let kinematics = dirs.figures.join(format!("kinematics-{tag}.csv"));
    write_text(
        &kinematics,
        &kinematics_csv(&traj.column(GROUPMAP_COLUMN)?, dt)?,
    )?;
    Ok(vec![groupmap, kinematics])
}

fn bloch_files(dirs: &Dirs) -> CmdResult<Vec<PathBuf>> {
    [
        (Axis::X, StartState::Zero, "rx-zero"),
        (Axis::Y, StartState::Zero, "ry-zero"),
        (Axis::Z, StartState::Plus, "rz-plus"),
    ]
    .into_iter()
    .map(|(axis, state, name)| {
        let path = dirs.figures.join(format!("bloch-{name}.csv"));
        write_text(&path, &bloch_csv(&bloch_sweep(axis, state, BLOCH_SAMPLES)?))?;
        Ok(path)
    })
    .collect()
}

pub fn run(a: &ReproduceArgs, argv: &[String]) -> CmdResult {
    let dirs = Dirs {
        traces: a.out_dir.join("traces"),
        metrics: a.out_dir.join("metrics"),
        figures: a.out_dir.join("figures"),
    };
    for d in [&dirs.traces, &dirs.metrics, &dirs.figures] {
        mkdir(d)?;
    }

    let mut jobs: Vec<(Mode, usize, u64)> = Vec::new();
    for n in a.qubits.clone().rev() {
        for seed in a.seeds.clone() {
            for mode in [Mode::Nn, Mode::Direct] {
                jobs.push((mode, n, seed as u64));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Failure::usage(format!("cannot start worker pool: {e}")))?;
    let runs: Vec<Run> = pool.install(|| {
        jobs.par_iter()
            .map(|&(mode, n, seed)| run_one(a, &dirs, mode, n, seed))
            .collect::<CmdResult<Vec<_>>>()
    })?;

    let mut outputs: Vec<PathBuf> = Vec::new();
    let mut arms = Vec::new();
    for n in a.qubits.clone() {
        for mode in [Mode::Nn, Mode::Direct] {
            let mut group: Vec<&Run> = runs
                .iter()
                .filter(|r| r.mode == mode && r.num_qubits == n)
                .collect();
            group.sort_by_key(|x| x.seed);
            outputs.extend(group.iter().flat_map(|r| r.files.iter().cloned()));
            let mut by_length = group.clone();
            by_length.sort_by(|x, y| {
                x.metrics
                    .length
                    .total_cmp(&y.metrics.length)
                    .then(x.seed.cmp(&y.seed))
            });
            let representative = by_length[(by_length.len() - 1) / 2];
            outputs.extend(figure_files(&dirs, representative, a.dt)?);
            arms.push(ArmRecord {
                mode,
                num_qubits: n,
                seeds: group.iter().map(|r| r.seed).collect(),
                representative_seed: representative.seed,
                median_energy: median(group.iter().map(|r| r.metrics.energy).collect()),
                median_length: median(group.iter().map(|r| r.metrics.length).collect()),
            });
        }
    }
    outputs.extend(bloch_files(&dirs)?);

    if a.plateau_samples > 0 {
        let scan = VarianceScan {
            samples: a.plateau_samples,
            seed: 0,
            all_components: false,
        };
        let rows =
            gradient_variance_scan(a.qubits.clone(), &scan, AnsatzConfig::hardware_efficient)?;
        let path = a.out_dir.join("plateau.csv");
        write_text(&path, &variance_csv(&rows))?;
        outputs.push(path);
    }

    let metrics = |mode: Mode| -> Vec<TrajectoryMetrics> {
        runs.iter()
            .filter(|r| r.mode == mode)
            .map(|r| r.metrics.clone())
            .collect()
    };
    let comparison = compare_arms(&metrics(Mode::Nn), &metrics(Mode::Direct))?;
    let text = comparison_text(&comparison);
    let csv_path = a.out_dir.join("comparison.csv");
    let text_path = a.out_dir.join("comparison.txt");
    write_text(&csv_path, &comparison_csv(&comparison))?;
    write_text(&text_path, &text)?;
    let summary = Summary {
        iterations: a.iters,
        delta_t: a.dt,
        arms,
        ordering: comparison
            .iter()
            .map(|r| Ordering {
                num_qubits: r.num_qubits,
                energy_lower_with_nn: r.energy_ratio < 1.0,
                length_lower_with_nn: r.length_ratio < 1.0,
            })
            .collect(),
        comparison,
    };
    let summary_path = a.out_dir.join("summary.json");
    write_json(&summary_path, &summary)?;
    outputs.extend([csv_path, text_path, summary_path]);

    print!("{text}");
    let config = json!({
        "qubits": [a.qubits.start(), a.qubits.end()],
        "seeds": [a.seeds.start(), a.seeds.end()],
        "iterations": a.iters,
        "delta_t": a.dt,
        "plateau_samples": a.plateau_samples,
        "learning_rate": {
            "direct": TrainConfig::default_learning_rate(Mode::Direct),
            "nn": TrainConfig::default_learning_rate(Mode::Nn),
        },
    });
    manifest::record(
        argv,
        "reproduce",
        None,
        config,
        &outputs,
        &a.out_dir.join("reproduce"),
    )?;
    Ok(())
}
