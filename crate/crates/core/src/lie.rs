//! SU(2) and its Lie algebra su(2).
//!
//! Algebra elements are stored as real coefficients `(alpha, beta, gamma)` over
//! the basis `{iX, iY, iZ}`, so `A = i(alpha X + beta Y + gamma Z)`. The 2×2
//! matrix is a derived view. Group elements carry the matrix directly and are
//! validated against `U†U = I`, `det U = 1` on construction.
//!
//! With this basis the bi-invariant inner product `<A, B> = -tr(AB)` reduces to
//! `2 (a · b)` on coefficient vectors, and the bracket `[A, B] = AB - BA` reduces
//! to `-2 (a × b)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = Matrix2<Complex64>;

/// Tolerance for group membership checks.
pub const GROUP_TOL: f64 = 1e-10;
/// Tolerance for algebra identities.
pub const ALGEBRA_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// One of the three Pauli directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// The Pauli matrix for this axis.
    pub fn pauli(self) -> Mat2 {
        match self {
            Axis::X => Mat2::new(ZERO, ONE, ONE, ZERO),
            Axis::Y => Mat2::new(ZERO, -I, I, ZERO),
            Axis::Z => Mat2::new(ONE, ZERO, ZERO, -ONE),
        }
    }

    /// Unit generator `iP` along this axis.
    pub fn generator(self) -> AlgebraElement {
        AlgebraElement::along(self, 1.0)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(format!("unknown axis '{other}', expected x, y or z")),
        }
    }
}

/// An element of su(2), `i(alpha X + beta Y + gamma Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AlgebraElement {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl AlgebraElement {
    pub const ZERO: AlgebraElement = AlgebraElement::new(0.0, 0.0, 0.0);

    pub const fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn along(axis: Axis, coefficient: f64) -> Self {
        match axis {
            Axis::X => Self::new(coefficient, 0.0, 0.0),
            Axis::Y => Self::new(0.0, coefficient, 0.0),
            Axis::Z => Self::new(0.0, 0.0, coefficient),
        }
    }

    pub fn coefficients(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    pub fn from_coefficients(c: [f64; 3]) -> Self {
        Self::new(c[0], c[1], c[2])
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coefficient_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Norm induced by the Killing inner product, `sqrt(2) * |coefficients|`.
    pub fn killing_norm(&self) -> f64 {
        killing_inner(self, self).sqrt()
    }

    fn dot(&self, other: &Self) -> f64 {
        self.alpha * other.alpha + self.beta * other.beta + self.gamma * other.gamma
    }

    /// The 2×2 skew-Hermitian traceless matrix `[[iγ, β + iα], [-β + iα, -iγ]]`.
    pub fn to_matrix(&self) -> Mat2 {
        Mat2::new(
            Complex64::new(0.0, self.gamma),
            Complex64::new(self.beta, self.alpha),
            Complex64::new(-self.beta, self.alpha),
            Complex64::new(0.0, -self.gamma),
        )
    }

    /// Reads coefficients back off a matrix, rejecting anything that is not
    /// skew-Hermitian and traceless.
    pub fn from_matrix(m: &Mat2) -> Result<Self> {
        let skew = (m + m.adjoint()).norm();
        let trace = m.trace().norm();
        let scale = m.norm().max(1.0);
        if skew > ALGEBRA_TOL * scale || trace > ALGEBRA_TOL * scale {
            return Err(Error::NotInAlgebra { skew, trace });
        }
        Ok(Self::project(m))
    }

    /// Orthogonal projection onto su(2) coordinates, no validation.
    pub(crate) fn project(m: &Mat2) -> Self {
        Self::new(
            0.5 * (m[(0, 1)].im + m[(1, 0)].im),
            0.5 * (m[(0, 1)].re - m[(1, 0)].re),
            0.5 * (m[(0, 0)].im - m[(1, 1)].im),
        )
    }
}

impl Add for AlgebraElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.alpha + rhs.alpha,
            self.beta + rhs.beta,
            self.gamma + rhs.gamma,
        )
    }
}

impl Sub for AlgebraElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for AlgebraElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.alpha, -self.beta, -self.gamma)
    }
}

impl Mul<AlgebraElement> for f64 {
    type Output = AlgebraElement;
    fn mul(self, rhs: AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(self * rhs.alpha, self * rhs.beta, self * rhs.gamma)
    }
}

/// A 2×2 special unitary matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    m: Mat2,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self {
            m: Mat2::identity(),
        }
    }

    pub fn from_matrix(m: Mat2) -> Result<Self> {
        let g = Self { m };
        g.check()?;
        Ok(g)
    }

    pub(crate) fn from_matrix_unchecked(m: Mat2) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    /// `U†`, which is the group inverse.
    pub fn inverse(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// Frobenius norm of `U†U - I`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.m.adjoint() * self.m - Mat2::identity()).norm()
    }

    /// `|det U - 1|`.
    pub fn determinant_defect(&self) -> f64 {
        (self.m.determinant() - ONE).norm()
    }

    fn check(&self) -> Result<()> {
        let unitarity = self.unitarity_defect();
        let determinant = self.determinant_defect();
        if unitarity > GROUP_TOL || determinant > GROUP_TOL || !unitarity.is_finite() {
            return Err(Error::NotSpecialUnitary {
                unitarity,
                determinant,
            });
        }
        Ok(())
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: GroupElement) -> GroupElement {
        GroupElement { m: self.m * rhs.m }
    }
}

/// The basis `(iX, iY, iZ)`.
pub fn pauli_basis() -> (AlgebraElement, AlgebraElement, AlgebraElement) {
    (
        Axis::X.generator(),
        Axis::Y.generator(),
        Axis::Z.generator(),
    )
}

/// `[A, B] = AB - BA`, computed in coefficients as `-2 (a × b)`.
pub fn lie_bracket(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    AlgebraElement::new(
        -2.0 * (a.beta * b.gamma - a.gamma * b.beta),
        -2.0 * (a.gamma * b.alpha - a.alpha * b.gamma),
        -2.0 * (a.alpha * b.beta - a.beta * b.alpha),
    )
}

/// `<A, B> = -tr(AB) = 2 (a · b)`.
pub fn killing_inner(a: &AlgebraElement, b: &AlgebraElement) -> f64 {
    2.0 * a.dot(b)
}

/// Closed-form exponential: `cos(r) I + (sin(r) / r) A` with `r = |coefficients|`.
pub fn exp_map(a: &AlgebraElement) -> GroupElement {
    let r = a.coefficient_norm();
    // sin(r)/r, series near zero
    let sinc = if r < 1e-6 {
        1.0 - r * r / 6.0
    } else {
        r.sin() / r
    };
    let m =
        Mat2::identity() * Complex64::new(r.cos(), 0.0) + a.to_matrix() * Complex64::new(sinc, 0.0);
    GroupElement::from_matrix_unchecked(m)
}

/// Principal logarithm, returning the unique element with `r < π`.
///
/// Fails at `-I`, where every axis gives the same exponential, and on input
/// that is not special unitary.
pub fn log_map(u: &GroupElement) -> Result<AlgebraElement> {
    u.check()?;
    let m = u.matrix();
    // u = cos(r) I + sin(r) i(n · σ)
    let cos_r = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
    let v = AlgebraElement::project(m);
    let sin_r = v.coefficient_norm();
    if sin_r < 1e-12 && cos_r < 0.0 {
        return Err(Error::LogBranchSingularity);
    }
    if sin_r == 0.0 {
        return Ok(AlgebraElement::ZERO);
    }
    let r = sin_r.atan2(cos_r);
    Ok((r / sin_r) * v)
}

/// `Ad_g(A) = g A g⁻¹`.
pub fn adjoint(g: &GroupElement, a: &AlgebraElement) -> AlgebraElement {
    let m = g.matrix() * a.to_matrix() * g.matrix().adjoint();
    AlgebraElement::project(&m)
}

/// `R_axis(θ) = exp(-i P θ / 2)`.
pub fn rotation_gate(axis: Axis, theta: f64) -> GroupElement {
    exp_map(&AlgebraElement::along(axis, -0.5 * theta))
}

/// The geodesic `t ↦ U₀ exp(tA)` through `base` in direction `direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicCurve {
    pub base: GroupElement,
    pub direction: AlgebraElement,
}

impl GeodesicCurve {
    pub fn new(base: GroupElement, direction: AlgebraElement) -> Self {
        Self { base, direction }
    }

    pub fn sample(&self, t: f64) -> GroupElement {
        self.base * exp_map(&(t * self.direction))
    }
}
