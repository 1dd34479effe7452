use geogate_core::analysis::{
    analyze, central_acceleration, central_velocity, energy_and_length, geodesic_deviation,
    group_map_series, normalize_trace, AnalysisOptions,
};
use geogate_core::io::{parse_trajectory_csv, trajectory_csv};
use geogate_core::lie::Axis;
use geogate_core::train::ParameterTrajectory;
use proptest::prelude::*;

fn from_columns(columns: &[Vec<f64>]) -> ParameterTrajectory {
    let len = columns[0].len();
    ParameterTrajectory::from_rows(
        (0..len)
            .map(|k| columns.iter().map(|c| c[k]).collect())
            .collect(),
    )
    .unwrap()
}

fn trace() -> impl Strategy<Value = ParameterTrajectory> {
    (1usize..5, 2usize..40).prop_flat_map(|(m, len)| {
        prop::collection::vec(prop::collection::vec(-10.0..10.0f64, len), m)
            .prop_map(|cols| from_columns(&cols))
    })
}

fn series() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, 2..60)
}

proptest! {
    #[test]
    fn normalization_is_idempotent(t in trace()) {
        let once = normalize_trace(&t).unwrap();
        let twice = normalize_trace(&once).unwrap();
        prop_assert_eq!(once.rows(), twice.rows());
        prop_assert!(once.rows().iter().flatten().all(|v| (-1.0..=1.0).contains(v)));
    }

    #[test]
    fn normalized_columns_hit_both_ends_unless_constant(t in trace()) {
        let n = normalize_trace(&t).unwrap();
        for col in n.columns() {
            let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!((lo == -1.0 && hi == 1.0) || col.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn energy_and_length_ignore_reversal(s in series()) {
        let (e, l) = energy_and_length(&s).unwrap();
        let rev: Vec<f64> = s.iter().rev().copied().collect();
        let (er, lr) = energy_and_length(&rev).unwrap();
        prop_assert!((e - er).abs() <= 1e-12 * (1.0 + e));
        prop_assert!((l - lr).abs() <= 1e-12 * (1.0 + l));
        let neg: Vec<f64> = s.iter().map(|v| -v).collect();
        prop_assert_eq!(energy_and_length(&neg).unwrap().1, l);
        prop_assert!(e >= 0.0 && l >= 0.0);
    }

    #[test]
    fn differences_are_exact_on_quadratics(
        a in -3.0..3.0f64,
        b in -3.0..3.0f64,
        c in -3.0..3.0f64,
        dt in 1usize..5,
    ) {
        let s: Vec<f64> = (0..40).map(|k| a + b * k as f64 + c * (k * k) as f64).collect();
        let v = central_velocity(&s, dt).unwrap();
        for (i, vi) in v.iter().enumerate() {
            let k = (i + dt) as f64;
            prop_assert!((vi - (b + 2.0 * c * k)).abs() <= 1e-12 * (1.0 + vi.abs()));
        }
        for ai in central_acceleration(&v, dt).unwrap() {
            prop_assert!((ai - 2.0 * c).abs() <= 1e-12 * 40.0);
        }
    }

    #[test]
    fn group_map_stays_in_unit_interval(t in trace(), stride in 1usize..7) {
        let s = group_map_series(&t, 0, Axis::Y, stride).unwrap();
        prop_assert_eq!(s.samples.len(), t.len().div_ceil(stride));
        for w in s.samples.windows(2) {
            prop_assert_eq!(w[1].0 - w[0].0, stride);
        }
        for &(k, y) in &s.samples {
            prop_assert!((-1.0..=1.0).contains(&y));
            prop_assert!((y - t.rows()[k][0].cos()).abs() <= 1e-12);
        }
    }

    #[test]
    fn csv_round_trip_is_lossless(t in trace()) {
        let back = parse_trajectory_csv(&trajectory_csv(&t), "mem").unwrap();
        prop_assert_eq!(back.rows(), t.rows());
    }

    #[test]
    fn linear_traces_are_geodesics(start in -1.0..1.0f64, slope in -0.1..0.1f64, len in 3usize..60) {
        let col: Vec<f64> = (0..len).map(|k| start + slope * k as f64).collect();
        let t = from_columns(&[col]);
        for axis in Axis::ALL {
            prop_assert!(geodesic_deviation(&t, 0, axis).unwrap() < 1e-10);
        }
    }
}

fn options(delta_t: usize) -> AnalysisOptions {
    AnalysisOptions {
        delta_t,
        ..AnalysisOptions::default()
    }
}

#[test]
fn singleton_series_has_no_length() {
    assert!(energy_and_length(&[1.0]).is_err());
    assert_eq!(
        energy_and_length(&[1.0, 1.0, 1.0, 1.0]).unwrap(),
        (1.0, 0.0)
    );
}

#[test]
fn constant_trace_gives_zeros() {
    let t = from_columns(&[vec![2.0; 30], vec![-0.5; 30]]);
    let m = analyze(&t, &options(5)).unwrap();
    assert_eq!((m.v_bar, m.a_bar, m.length), (0.0, 0.0, 0.0));
    assert_eq!(m.tau_v, None);
    assert!((m.energy - (4.0 + 0.25) / 2.0).abs() <= 1e-12);
    let n = analyze(
        &t,
        &AnalysisOptions {
            normalize: true,
            ..options(5)
        },
    )
    .unwrap();
    assert_eq!(n.energy, 0.0);
}

#[test]
fn linear_ramp_has_constant_velocity() {
    let slope = 0.37;
    let col: Vec<f64> = (0..25).map(|k| 1.0 + slope * k as f64).collect();
    let m = analyze(&from_columns(&[col]), &options(1)).unwrap();
    assert!((m.v_bar - slope).abs() <= 1e-12);
    assert!(m.a_bar.abs() <= 1e-12);
    assert!(m.tau_v.unwrap().abs() <= 1e-9);
    assert!((m.length - slope * 24.0).abs() <= 1e-12);
}

#[test]
fn quadratic_has_exact_second_difference() {
    let c = 0.125;
    let col: Vec<f64> = (0..50).map(|k| c * (k * k) as f64).collect();
    let m = analyze(&from_columns(&[col]), &options(5)).unwrap();
    assert!((m.a_bar - 2.0 * c).abs() <= 1e-12);
    assert!(m.tau_a.unwrap().abs() <= 1e-9);
}

#[test]
fn curved_traces_deviate_from_geodesics() {
    let col: Vec<f64> = (0..40).map(|k| 0.002 * (k * k) as f64).collect();
    assert!(geodesic_deviation(&from_columns(&[col]), 0, Axis::Y).unwrap() > 1e-4);
}

#[test]
fn noisy_trace_is_rougher_than_smooth() {
    let smooth: Vec<f64> = (0..200).map(|k| (k as f64 / 60.0).tanh()).collect();
    let noisy: Vec<f64> = smooth
        .iter()
        .enumerate()
        .map(|(k, v)| v + 0.05 * ((k * 7919 % 97) as f64 / 97.0 - 0.5))
        .collect();
    let ms = analyze(&from_columns(&[smooth]), &options(5)).unwrap();
    let mn = analyze(&from_columns(&[noisy]), &options(5)).unwrap();
    assert!(mn.a_bar > ms.a_bar);
    assert!(mn.length > ms.length);
}
