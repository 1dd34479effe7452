//! File formats.
//!
//! * trajectory CSV: `iter,theta_0,…,theta_{m-1}`, one row per recorded iteration,
//!   with a `<stem>.meta.json` sidecar holding [`TrajectoryMeta`];
//! * Bloch CSV `t,x,y,z`, group-map CSV `k,y`, variance CSV `n,variance`,
//!   kinematics CSV `k,velocity,acceleration`;
//! * metrics and reports as pretty JSON.
//!
//! Floats are written with Rust's shortest round-trip formatting (`{:?}`,
//! exponent form for very small or large magnitudes), so files are lossless
//! and byte-stable.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::analysis::{central_acceleration, central_velocity, GroupMapSeries};
use crate::error::{Error, Result};
use crate::sim::BlochSample;
use crate::train::{ParameterTrajectory, TrajectoryMeta};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(io_err(path))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        path: path.display().to_string(),
        source,
    })?;
    text.push('\n');
    write_text(path, &text)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.display().to_string(),
        source,
    })
}

/// `run.csv` → `run.meta.json`.
pub fn sidecar_path(trace: &Path) -> PathBuf {
    trace.with_extension("meta.json")
}

pub fn trajectory_csv(traj: &ParameterTrajectory) -> String {
    let mut out = String::from("iter");
    for j in 0..traj.parameter_count() {
        out.push_str(&format!(",theta_{j}"));
    }
    out.push('\n');
    for (k, row) in traj.rows().iter().enumerate() {
        out.push_str(&k.to_string());
        for v in row {
            out.push_str(&format!(",{v:?}"));
        }
        out.push('\n');
    }
    out
}

/// Writes the CSV and, when metadata is present, the sidecar. Returns the paths written.
pub fn save_trajectory(path: &Path, traj: &ParameterTrajectory) -> Result<Vec<PathBuf>> {
    write_text(path, &trajectory_csv(traj))?;
    let mut written = vec![path.to_path_buf()];
    if let Some(meta) = &traj.meta {
        let side = sidecar_path(path);
        write_json(&side, meta)?;
        written.push(side);
    }
    Ok(written)
}

/// Reads a trajectory CSV and its sidecar, if one exists.
pub fn load_trajectory(path: &Path) -> Result<ParameterTrajectory> {
    let traj = read_trajectory_csv(path)?;
    let side = sidecar_path(path);
    if side.exists() {
        let meta: TrajectoryMeta = read_json(&side)?;
        Ok(traj.with_meta(meta))
    } else {
        Ok(traj)
    }
}

pub fn read_trajectory_csv(path: &Path) -> Result<ParameterTrajectory> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_trajectory_csv(&text, &path.display().to_string())
}

/// Parses trajectory CSV text; `origin` names the source in error messages.
pub fn parse_trajectory_csv(text: &str, origin: &str) -> Result<ParameterTrajectory> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: origin.to_string(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());

    let header = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if header.is_empty() || header.get(0) != Some("iter") {
        return Err(parse_err(1, "header must start with 'iter'".into()));
    }
    for (j, name) in header.iter().skip(1).enumerate() {
        if name != format!("theta_{j}") {
            return Err(parse_err(
                1,
                format!("expected column 'theta_{j}', found '{name}'"),
            ));
        }
    }
    let width = header.len();
    if width < 2 {
        return Err(parse_err(1, "no theta columns".into()));
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != width {
            return Err(parse_err(
                line,
                format!("expected {width} fields, found {}", record.len()),
            ));
        }
        let iter: usize = record[0]
            .trim()
            .parse()
            .map_err(|_| parse_err(line, format!("bad iteration index '{}'", &record[0])))?;
        if iter != rows.len() {
            return Err(parse_err(
                line,
                format!(
                    "iteration index {iter} out of sequence, expected {}",
                    rows.len()
                ),
            ));
        }
        let row = record
            .iter()
            .skip(1)
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(line, format!("bad number '{f}'")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(2, "no data rows".into()));
    }
    ParameterTrajectory::from_rows(rows)
}

pub fn bloch_csv(samples: &[BlochSample]) -> String {
    let mut out = String::from("t,x,y,z\n");
    for s in samples {
        out.push_str(&format!("{:?},{:?},{:?},{:?}\n", s.t, s.x, s.y, s.z));
    }
    out
}

pub fn group_map_csv(series: &GroupMapSeries) -> String {
    let mut out = String::from("k,y\n");
    for (k, y) in &series.samples {
        out.push_str(&format!("{k},{y:?}\n"));
    }
    out
}

/// Central-difference velocity and acceleration of one series, keyed by the
/// iteration at the stencil centre. Acceleration is blank where its wider
/// stencil does not fit.
pub fn kinematics_csv(series: &[f64], delta_t: usize) -> Result<String> {
    let velocity = central_velocity(series, delta_t)?;
    let acceleration = central_acceleration(&velocity, delta_t)?;
    let mut out = String::from("k,velocity,acceleration\n");
    for (i, v) in velocity.iter().enumerate() {
        let a = i
            .checked_sub(delta_t)
            .and_then(|j| acceleration.get(j))
            .map_or_else(String::new, |a| format!("{a:?}"));
        out.push_str(&format!("{},{v:?},{a}\n", i + delta_t));
    }
    Ok(out)
}

pub fn variance_csv(rows: &[(usize, f64)]) -> String {
    let mut out = String::from("n,variance\n");
    for (n, v) in rows {
        out.push_str(&format!("{n},{v:?}\n"));
    }
    out
}
