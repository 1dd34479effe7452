//! Run manifests: what was run, with which settings, and what it wrote.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use geogate_core::io::{read_json, write_json};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::{Cli, Command, ReplayArgs};
use crate::{CmdResult, Failure};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// The command line as invoked.
    pub argv: Vec<String>,
    /// The command line `replay` runs: `argv` with the resolved seed made explicit.
    pub replay_argv: Vec<String>,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub outputs: Vec<OutputRecord>,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp_unix: u64,
}

/// `<out>.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name: OsString = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or_else(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        })
}

pub fn sha256_file(path: &Path) -> CmdResult<String> {
    let bytes = fs::read(path)
        .map_err(|e| Failure::data(format!("cannot read {}: {e}", path.display())))?;
    Ok(Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

/// Writes the manifest for a finished command next to `anchor`.
pub fn record(
    argv: &[String],
    command: &str,
    seed: Option<u64>,
    config: serde_json::Value,
    outputs: &[PathBuf],
    anchor: &Path,
) -> CmdResult<PathBuf> {
    let mut replay_argv = argv.to_vec();
    if let Some(first) = replay_argv.first_mut() {
        *first = "geogate".into();
    }
    if let Some(seed) = seed {
        let explicit = argv
            .iter()
            .any(|a| a == "--seed" || a.starts_with("--seed="));
        if !explicit {
            replay_argv.push("--seed".into());
            replay_argv.push(seed.to_string());
        }
    }
    let outputs = outputs
        .iter()
        .map(|p| {
            Ok(OutputRecord {
                path: p.display().to_string(),
                sha256: sha256_file(p)?,
            })
        })
        .collect::<CmdResult<Vec<_>>>()?;
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        argv: argv.to_vec(),
        replay_argv,
        seed,
        config,
        outputs,
        timestamp_unix: timestamp(),
    };
    let path = manifest_path(anchor);
    write_json(&path, &manifest)?;
    Ok(path)
}

/// Re-runs the manifest's command line, then checks every listed output
/// against its recorded hash. Run it from the original working directory
/// when the recorded paths are relative.
pub fn replay(args: &ReplayArgs) -> CmdResult {
    let manifest: RunManifest = read_json(&args.manifest)?;
    let cli = Cli::try_parse_from(&manifest.replay_argv)
        .map_err(|e| Failure::usage(format!("manifest command line does not parse: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(Failure::usage("a manifest cannot replay another replay"));
    }
    crate::run(cli, &manifest.replay_argv)?;

    let mismatched: Vec<&str> = manifest
        .outputs
        .iter()
        .filter_map(|o| match sha256_file(Path::new(&o.path)) {
            Ok(h) if h == o.sha256 => None,
            _ => Some(o.path.as_str()),
        })
        .collect();
    if mismatched.is_empty() {
        println!(
            "replayed {}: {} outputs match",
            manifest.command,
            manifest.outputs.len()
        );
        Ok(())
    } else {
        Err(Failure::data(format!(
            "replay of {} changed: {}",
            manifest.command,
            mismatched.join(", ")
        )))
    }
}
