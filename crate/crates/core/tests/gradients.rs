//! Analytic gradients against central finite differences.

use geogate_core::lie::Axis;
use geogate_core::nn::NetworkWeights;
use geogate_core::sim::{cost, AnsatzConfig, Entangler};
use geogate_core::train::parameter_shift_grad;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn fd_cost_grad(params: &[f64], config: &AnsatzConfig, h: f64) -> Vec<f64> {
    (0..params.len())
        .map(|j| {
            let mut plus = params.to_vec();
            let mut minus = params.to_vec();
            plus[j] += h;
            minus[j] -= h;
            (cost(&plus, config).unwrap() - cost(&minus, config).unwrap()) / (2.0 * h)
        })
        .collect()
}

#[test]
fn parameter_shift_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let axes = [Axis::X, Axis::Y, Axis::Z];
    let mut configs = 0;
    for n in 2..=5 {
        for trial in 0..6 {
            let layers = 1 + trial % 3;
            let schedule: Vec<Axis> = (0..layers).map(|_| axes[rng.random_range(0..3)]).collect();
            let config = AnsatzConfig {
                num_qubits: n,
                num_layers: layers,
                rotation_axes: schedule,
                entangler: if trial % 2 == 0 {
                    Entangler::RingCnot
                } else {
                    Entangler::LineCnot
                },
            };
            let params: Vec<f64> = (0..config.parameter_count())
                .map(|_| rng.random_range(-PI..PI))
                .collect();
            let shift = parameter_shift_grad(&params, &config).unwrap();
            let fd = fd_cost_grad(&params, &config, 1e-5);
            for (j, (a, b)) in shift.iter().zip(&fd).enumerate() {
                assert!(
                    (a - b).abs() <= 1e-6,
                    "n={n} trial={trial} j={j}: {a} vs {b}"
                );
            }
            configs += 1;
        }
    }
    assert!(configs >= 20);
}

/// `Σ_j c_j θ_j(w)`: its weight gradient is `backward(input, c)`.
fn projected_output(net: &NetworkWeights, input: &[f64], c: &[f64]) -> f64 {
    net.forward(input)
        .unwrap()
        .iter()
        .zip(c)
        .map(|(t, c)| t * c)
        .sum()
}

#[test]
fn mlp_backward_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = 1e-6;
    for instance in 0..50u64 {
        let input_dim = rng.random_range(1..6);
        let hidden_dim = rng.random_range(1..9);
        let output_dim = rng.random_range(1..7);
        let mut net = NetworkWeights::init(instance, input_dim, hidden_dim, output_dim).unwrap();
        // Non-zero biases so every parameter matters.
        let mut flat = net.flatten();
        for v in flat.iter_mut() {
            *v += rng.random_range(-0.3..0.3);
        }
        net.set_flat(&flat).unwrap();

        let input: Vec<f64> = (0..input_dim)
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let upstream: Vec<f64> = (0..output_dim)
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let analytic = net.backward(&input, &upstream).unwrap().flatten();
        assert_eq!(analytic.len(), flat.len());

        for (k, &g) in analytic.iter().enumerate() {
            let mut probe = net.clone();
            let mut w = flat.clone();
            w[k] += h;
            probe.set_flat(&w).unwrap();
            let up = projected_output(&probe, &input, &upstream);
            w[k] -= 2.0 * h;
            probe.set_flat(&w).unwrap();
            let down = projected_output(&probe, &input, &upstream);
            let fd = (up - down) / (2.0 * h);
            let scale = g.abs().max(fd.abs()).max(1e-3);
            assert!(
                (g - fd).abs() / scale <= 1e-5,
                "instance {instance}, weight {k}: {g} vs {fd}"
            );
        }
    }
}
