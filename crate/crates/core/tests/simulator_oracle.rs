//! The statevector simulator against dense `2ⁿ × 2ⁿ` matrices built from
//! Kronecker products (qubit 0 is the least significant index bit).

use geogate_core::lie::{rotation_gate, Axis};
use geogate_core::sim::{
    apply_ansatz, bloch_sweep, cost, AnsatzConfig, Entangler, StartState, StateVector,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

type CMat = DMatrix<Complex64>;

fn textbook_rotation(axis: Axis, theta: f64) -> CMat {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let z = Complex64::new;
    let entries = match axis {
        Axis::X => [z(c, 0.0), z(0.0, -s), z(0.0, -s), z(c, 0.0)],
        Axis::Y => [z(c, 0.0), z(-s, 0.0), z(s, 0.0), z(c, 0.0)],
        Axis::Z => [z(c, -s), z(0.0, 0.0), z(0.0, 0.0), z(c, s)],
    };
    DMatrix::from_row_slice(2, 2, &entries)
}

/// `I ⊗ … ⊗ G ⊗ … ⊗ I` with `G` on qubit `q`.
fn embed(gate: &CMat, q: usize, n: usize) -> CMat {
    let mut full = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for k in (0..n).rev() {
        let factor = if k == q {
            gate.clone()
        } else {
            DMatrix::identity(2, 2)
        };
        full = full.kronecker(&factor);
    }
    full
}

fn cnot_matrix(control: usize, target: usize, n: usize) -> CMat {
    let dim = 1 << n;
    let mut m = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        let y = if x >> control & 1 == 1 {
            x ^ (1 << target)
        } else {
            x
        };
        m[(y, x)] = Complex64::new(1.0, 0.0);
    }
    m
}

fn ansatz_matrix(params: &[f64], n: usize, layers: usize, axis: Axis, ring: bool) -> CMat {
    let mut u: CMat = DMatrix::identity(1 << n, 1 << n);
    for l in 0..layers {
        for q in 0..n {
            u = embed(&textbook_rotation(axis, params[l * n + q]), q, n) * u;
        }
        for q in 0..n - 1 {
            u = cnot_matrix(q, q + 1, n) * u;
        }
        if ring {
            u = cnot_matrix(n - 1, 0, n) * u;
        }
    }
    u
}

fn zz_diag(n: usize) -> Vec<f64> {
    (0..1usize << n)
        .map(|x| {
            if (x & 1) ^ (x >> 1 & 1) == 0 {
                1.0
            } else {
                -1.0
            }
        })
        .collect()
}

fn state_distance(sim: &StateVector, dense: &DVector<Complex64>) -> f64 {
    sim.amplitudes()
        .iter()
        .zip(dense.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

fn random_state(n: usize, seed: &[f64]) -> (StateVector, DVector<Complex64>) {
    let amps: Vec<Complex64> = (0..1usize << n)
        .map(|i| {
            Complex64::new(
                seed[(2 * i) % seed.len()] + 0.1 * i as f64,
                seed[(2 * i + 1) % seed.len()],
            )
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let amps: Vec<Complex64> = amps.iter().map(|a| a / norm).collect();
    (
        StateVector::from_amplitudes(amps.clone()).unwrap(),
        DVector::from_vec(amps),
    )
}

fn axis() -> impl Strategy<Value = Axis> {
    prop_oneof![Just(Axis::X), Just(Axis::Y), Just(Axis::Z)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn single_qubit_gate_matches_kronecker(
        n in 1usize..=4,
        q in 0usize..4,
        ax in axis(),
        theta in -PI..PI,
        seed in prop::collection::vec(-1.0..1.0f64, 8),
    ) {
        let q = q % n;
        let (mut sim, dense) = random_state(n, &seed);
        sim.apply_single_qubit(&rotation_gate(ax, theta), q).unwrap();
        let expected = embed(&textbook_rotation(ax, theta), q, n) * dense;
        prop_assert!(state_distance(&sim, &expected) <= 1e-12);
    }

    #[test]
    fn cnot_matches_permutation(
        n in 2usize..=4,
        c in 0usize..4,
        t in 0usize..4,
        seed in prop::collection::vec(-1.0..1.0f64, 8),
    ) {
        let (c, t) = (c % n, t % n);
        prop_assume!(c != t);
        let (mut sim, dense) = random_state(n, &seed);
        sim.apply_cnot(c, t).unwrap();
        prop_assert!(state_distance(&sim, &(cnot_matrix(c, t, n) * dense)) <= 1e-15);
    }

    #[test]
    fn ansatz_and_cost_match_dense_circuit(
        n in 2usize..=4,
        layers in 1usize..=3,
        ax in axis(),
        ring in any::<bool>(),
        params in prop::collection::vec(-PI..PI, 12),
    ) {
        let params = &params[..n * layers];
        let entangler = if ring { Entangler::RingCnot } else { Entangler::LineCnot };
        let config = AnsatzConfig::uniform(n, layers, ax, entangler);
        let sim = apply_ansatz(params, &config).unwrap();
        let mut zero = DVector::zeros(1 << n);
        zero[0] = Complex64::new(1.0, 0.0);
        let dense = ansatz_matrix(params, n, layers, ax, ring) * zero;
        prop_assert!(state_distance(&sim, &dense) <= 1e-12);

        let expected_cost: f64 = dense.iter().zip(zz_diag(n)).map(|(a, z)| a.norm_sqr() * z).sum();
        prop_assert!((cost(params, &config).unwrap() - expected_cost).abs() <= 1e-12);
    }
}

#[test]
fn two_qubit_single_layer_cost_is_cosine() {
    // Ry(θ) on qubit 0, then CNOT(0,1), CNOT(1,0): ⟨Z₀Z₁⟩ = cos θ.
    let config = AnsatzConfig::hardware_efficient(2);
    let one_layer = AnsatzConfig {
        num_layers: 1,
        rotation_axes: vec![Axis::Y],
        ..config
    };
    for k in 0..=16 {
        let theta = -PI + k as f64 * PI / 8.0;
        let c = cost(&[theta, 0.0], &one_layer).unwrap();
        assert!((c - theta.cos()).abs() <= 1e-12, "θ={theta}: {c}");
    }
}

#[test]
fn bloch_sweeps_trace_great_circles() {
    let cases = [
        (Axis::X, StartState::Zero, [1.0, 0.0, 0.0]),
        (Axis::Y, StartState::Zero, [0.0, 1.0, 0.0]),
        (Axis::Z, StartState::Plus, [0.0, 0.0, 1.0]),
    ];
    for (ax, start, normal) in cases {
        let samples = bloch_sweep(ax, start, 73).unwrap();
        for s in &samples {
            let v = [s.x, s.y, s.z];
            let norm = v.iter().map(|c| c * c).sum::<f64>();
            assert!((norm - 1.0).abs() <= 1e-10);
            let residual: f64 = v.iter().zip(normal).map(|(a, b)| a * b).sum();
            assert!(residual.abs() <= 1e-10, "{ax}: off-plane by {residual}");
        }
        let first = samples[0];
        let expected_start = match start {
            StartState::Zero => (0.0, 0.0, 1.0),
            StartState::Plus => (1.0, 0.0, 0.0),
        };
        assert!((first.x - expected_start.0).abs() <= 1e-12);
        assert!((first.y - expected_start.1).abs() <= 1e-12);
        assert!((first.z - expected_start.2).abs() <= 1e-12);
    }
}

#[test]
fn rz_on_plus_rotates_in_the_equator() {
    // Rz(θ)|+⟩ ∝ (|0⟩ + e^{iθ}|1⟩)/√2, Bloch vector (cos θ, sin θ, 0).
    for s in bloch_sweep(Axis::Z, StartState::Plus, 37).unwrap() {
        assert!((s.x - s.t.cos()).abs() <= 1e-12);
        assert!((s.y - s.t.sin()).abs() <= 1e-12);
        assert!(s.z.abs() <= 1e-12);
    }
}
