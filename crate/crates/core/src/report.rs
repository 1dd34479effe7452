//! With-NN vs without-NN comparison tables built from per-run metrics.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::TrajectoryMetrics;
use crate::error::{Error, Result};

/// Medians of the six statistics over the runs of one arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmSummary {
    pub runs: usize,
    pub v_bar: f64,
    pub a_bar: f64,
    pub energy: f64,
    pub length: f64,
    pub tau_v_percent: Option<f64>,
    pub tau_a_percent: Option<f64>,
}

impl ArmSummary {
    pub fn from_runs(runs: &[&TrajectoryMetrics]) -> Result<Self> {
        if runs.is_empty() {
            return Err(Error::config("cannot summarize an empty arm"));
        }
        let pick = |f: fn(&TrajectoryMetrics) -> f64| median(runs.iter().map(|m| f(m)).collect());
        let pick_opt = |f: fn(&TrajectoryMetrics) -> Option<f64>| {
            let vals: Vec<f64> = runs.iter().filter_map(|m| f(m)).collect();
            (!vals.is_empty()).then(|| median(vals))
        };
        Ok(Self {
            runs: runs.len(),
            v_bar: pick(|m| m.v_bar),
            a_bar: pick(|m| m.a_bar),
            energy: pick(|m| m.energy),
            length: pick(|m| m.length),
            tau_v_percent: pick_opt(|m| m.tau_v),
            tau_a_percent: pick_opt(|m| m.tau_a),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub num_qubits: usize,
    pub with_nn: ArmSummary,
    pub without_nn: ArmSummary,
    /// `E(with) / E(without)`.
    pub energy_ratio: f64,
    /// `L(with) / L(without)`.
    pub length_ratio: f64,
}

/// Median; mean of the two middle values for even counts.
pub fn median(mut values: Vec<f64>) -> f64 {
    assert!(!values.is_empty(), "median of empty set");
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Groups both arms by qubit count and summarizes each group.
///
/// Every metrics record must carry `num_qubits`. Only qubit counts present in
/// both arms produce a row.
pub fn compare_arms(
    with_nn: &[TrajectoryMetrics],
    without_nn: &[TrajectoryMetrics],
) -> Result<Vec<ComparisonRow>> {
    if with_nn.is_empty() || without_nn.is_empty() {
        return Err(Error::config("both arms need at least one metrics file"));
    }
    let with_groups = group_by_qubits("with", with_nn)?;
    let without_groups = group_by_qubits("without", without_nn)?;

    let rows = with_groups
        .iter()
        .filter_map(|(n, w)| without_groups.get(n).map(|wo| (*n, w, wo)))
        .map(|(n, w, wo)| {
            let with_nn = ArmSummary::from_runs(w)?;
            let without_nn = ArmSummary::from_runs(wo)?;
            Ok(ComparisonRow {
                num_qubits: n,
                with_nn,
                without_nn,
                energy_ratio: with_nn.energy / without_nn.energy,
                length_ratio: with_nn.length / without_nn.length,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::config("the two arms share no qubit count"));
    }
    Ok(rows)
}

fn group_by_qubits<'a>(
    arm: &str,
    runs: &'a [TrajectoryMetrics],
) -> Result<BTreeMap<usize, Vec<&'a TrajectoryMetrics>>> {
    let mut by_n: BTreeMap<usize, Vec<&TrajectoryMetrics>> = BTreeMap::new();
    for m in runs {
        let n = m.num_qubits.ok_or_else(|| {
            Error::config(format!(
                "a metrics record in the {arm} arm has no num_qubits"
            ))
        })?;
        by_n.entry(n).or_default().push(m);
    }
    Ok(by_n)
}

const METRIC_NAMES: [&str; 6] = [
    "v_bar",
    "a_bar",
    "energy",
    "length",
    "tau_v_percent",
    "tau_a_percent",
];

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

fn arm_fields(s: &ArmSummary) -> [String; 6] {
    [
        format!("{:?}", s.v_bar),
        format!("{:?}", s.a_bar),
        format!("{:?}", s.energy),
        format!("{:?}", s.length),
        fmt_opt(s.tau_v_percent),
        fmt_opt(s.tau_a_percent),
    ]
}

/// One row per qubit count: six columns per arm, then `E_ratio`, `L_ratio`.
pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut header = vec!["qubits".to_string()];
    for arm in ["with", "without"] {
        header.extend(METRIC_NAMES.iter().map(|m| format!("{arm}_{m}")));
    }
    header.push("E_ratio".into());
    header.push("L_ratio".into());

    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let mut fields = vec![r.num_qubits.to_string()];
        fields.extend(arm_fields(&r.with_nn));
        fields.extend(arm_fields(&r.without_nn));
        fields.push(format!("{:?}", r.energy_ratio));
        fields.push(format!("{:?}", r.length_ratio));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Two rows per qubit count (with / without), aligned for terminals.
pub fn comparison_text(rows: &[ComparisonRow]) -> String {
    let sci = |v: f64| format!("{v:.3e}");
    let pct = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.2}%"));
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<7} {:<11} {:>10} {:>10} {:>10} {:>10} {:>8} {:>8} {:>9} {:>9}",
        "qubits", "label", "v_bar", "a_bar", "E", "L", "tau_V", "tau_A", "E_ratio", "L_ratio"
    );
    for r in rows {
        for (label, s, ratios) in [
            (
                "with NN",
                &r.with_nn,
                Some((r.energy_ratio, r.length_ratio)),
            ),
            ("without NN", &r.without_nn, None),
        ] {
            let (e_ratio, l_ratio) = ratios.map_or((String::new(), String::new()), |(e, l)| {
                (format!("{e:.3}"), format!("{l:.3}"))
            });
            let qubits = if ratios.is_some() {
                r.num_qubits.to_string()
            } else {
                String::new()
            };
            let _ = writeln!(
                out,
                "{:<7} {:<11} {:>10} {:>10} {:>10} {:>10} {:>8} {:>8} {:>9} {:>9}",
                qubits,
                label,
                sci(s.v_bar),
                sci(s.a_bar),
                sci(s.energy),
                sci(s.length),
                pct(s.tau_v_percent),
                pct(s.tau_a_percent),
                e_ratio,
                l_ratio
            );
        }
    }
    out
}
