use geogate_core::lie::{
    adjoint, exp_map, killing_inner, lie_bracket, log_map, AlgebraElement, Axis, GeodesicCurve,
    GroupElement, Mat2,
};
use geogate_core::Error;
use nalgebra::Matrix2;
use num_complex::Complex64;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = f64> {
    -2.0..2.0f64
}

fn element() -> impl Strategy<Value = AlgebraElement> {
    (coeff(), coeff(), coeff()).prop_map(|(a, b, c)| AlgebraElement::new(a, b, c))
}

/// Algebra element with coefficient norm below `r_max`.
fn bounded(r_max: f64) -> impl Strategy<Value = AlgebraElement> {
    element().prop_map(move |a| {
        let r = a.coefficient_norm();
        if r < r_max {
            a
        } else {
            (0.999 * r_max / r) * a
        }
    })
}

fn group_element() -> impl Strategy<Value = GroupElement> {
    element().prop_map(|a| exp_map(&a))
}

fn max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Truncated Taylor series `Σ_{k<terms} A^k / k!`.
fn exp_series(a: &Mat2, terms: usize) -> Mat2 {
    let mut sum = Matrix2::identity();
    let mut term: Mat2 = Matrix2::identity();
    for k in 1..terms {
        term = term * a / Complex64::new(k as f64, 0.0);
        sum += term;
    }
    sum
}

fn coefficients_close(a: &AlgebraElement, b: &AlgebraElement, tol: f64) -> bool {
    a.coefficients()
        .iter()
        .zip(b.coefficients())
        .all(|(x, y)| (x - y).abs() <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn jacobi_identity(x in element(), y in element(), z in element()) {
        let sum = lie_bracket(&x, &lie_bracket(&y, &z))
            + lie_bracket(&y, &lie_bracket(&z, &x))
            + lie_bracket(&z, &lie_bracket(&x, &y));
        prop_assert!(sum.coefficient_norm() <= 1e-12, "Jacobi residual {}", sum.coefficient_norm());
    }

    #[test]
    fn bracket_is_anticommutative(x in element(), y in element()) {
        let sum = lie_bracket(&x, &y) + lie_bracket(&y, &x);
        prop_assert!(sum.coefficient_norm() <= 1e-12);
    }

    #[test]
    fn bracket_matches_matrix_commutator(x in element(), y in element()) {
        let (a, b) = (x.to_matrix(), y.to_matrix());
        let commutator = a * b - b * a;
        prop_assert!(max_abs_diff(&lie_bracket(&x, &y).to_matrix(), &commutator) <= 1e-12);
    }

    #[test]
    fn killing_form_matches_trace(x in element(), y in element()) {
        let trace = -(x.to_matrix() * y.to_matrix()).trace();
        prop_assert!((killing_inner(&x, &y) - trace.re).abs() <= 1e-12);
        prop_assert!(trace.im.abs() <= 1e-12);
    }

    #[test]
    fn exp_matches_power_series(a in bounded(3.0)) {
        let closed = exp_map(&a);
        let series = exp_series(&a.to_matrix(), 30);
        prop_assert!(max_abs_diff(closed.matrix(), &series) <= 1e-10);
        prop_assert!(closed.unitarity_defect() <= 1e-10);
        prop_assert!(closed.determinant_defect() <= 1e-10);
    }

    #[test]
    fn killing_form_is_bi_invariant(g in group_element(), x in element(), y in element()) {
        let lhs = killing_inner(&adjoint(&g, &x), &adjoint(&g, &y));
        let rhs = killing_inner(&x, &y);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
    }

    #[test]
    fn log_inverts_exp_inside_injectivity_radius(a in bounded(std::f64::consts::PI - 1e-3)) {
        let back = log_map(&exp_map(&a)).unwrap();
        prop_assert!(coefficients_close(&back, &a, 1e-9));
    }

    #[test]
    fn exp_inverts_log(g in group_element()) {
        match log_map(&g) {
            Ok(a) => prop_assert!(max_abs_diff(exp_map(&a).matrix(), g.matrix()) <= 1e-10),
            Err(Error::LogBranchSingularity) => {}
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn geodesic_log_velocity_is_constant(
        g in group_element(),
        a in bounded(1.0),
        steps in 3usize..40,
    ) {
        let curve = GeodesicCurve::new(g, a);
        let dt = 1.0 / steps as f64;
        let samples: Vec<GroupElement> = (0..=steps).map(|k| curve.sample(k as f64 * dt)).collect();
        for w in samples.windows(2) {
            let step = log_map(&(w[0].inverse() * w[1])).unwrap();
            prop_assert!(coefficients_close(&step, &(dt * a), 1e-10));
        }
    }
}

#[test]
fn log_rejects_minus_identity() {
    let minus_i = exp_map(&AlgebraElement::along(Axis::Z, std::f64::consts::PI));
    assert!(matches!(
        log_map(&minus_i),
        Err(Error::LogBranchSingularity)
    ));
}

#[test]
fn rotation_matches_textbook_matrices() {
    use geogate_core::lie::rotation_gate;
    let theta = 0.731_f64;
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let z = |re: f64, im: f64| Complex64::new(re, im);
    let expected = [
        (
            Axis::X,
            Matrix2::new(z(c, 0.0), z(0.0, -s), z(0.0, -s), z(c, 0.0)),
        ),
        (
            Axis::Y,
            Matrix2::new(z(c, 0.0), z(-s, 0.0), z(s, 0.0), z(c, 0.0)),
        ),
        (
            Axis::Z,
            Matrix2::new(z(c, -s), z(0.0, 0.0), z(0.0, 0.0), z(c, s)),
        ),
    ];
    for (axis, m) in expected {
        assert!(
            max_abs_diff(rotation_gate(axis, theta).matrix(), &m) <= 1e-15,
            "{axis}"
        );
    }
}
