//! Toy outer parametrix: the 2×2 problem with jump `[0, e^{2izη}; -e^{-2izη}, 0]`
//! on `[-1, 1]`, its closed-form solution and the identities it satisfies.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::ops::{Add, Mul, Sub};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::C;

pub const CONTOUR_RADIUS: f64 = 3.0;
pub const CONTOUR_POINTS: usize = 128;
pub const JUMP_DELTA: f64 = 1e-8;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub a: [[C; 2]; 2],
}

impl Matrix2 {
    pub fn new(a11: C, a12: C, a21: C, a22: C) -> Self {
        Matrix2 { a: [[a11, a12], [a21, a22]] }
    }

    pub fn identity() -> Self {
        Self::diag(c(1.0, 0.0), c(1.0, 0.0))
    }

    pub fn diag(d1: C, d2: C) -> Self {
        Self::new(d1, c(0.0, 0.0), c(0.0, 0.0), d2)
    }

    pub fn sigma3() -> Self {
        Self::diag(c(1.0, 0.0), c(-1.0, 0.0))
    }

    pub fn det(&self) -> C {
        self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0]
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        Self::new(self.a[1][1] / d, -self.a[0][1] / d, -self.a[1][0] / d, self.a[0][0] / d)
    }

    pub fn scale(&self, s: C) -> Self {
        Self::new(self.a[0][0] * s, self.a[0][1] * s, self.a[1][0] * s, self.a[1][1] * s)
    }

    /// Max-entry norm.
    pub fn norm(&self) -> f64 {
        self.a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, o: Matrix2) -> Matrix2 {
        let a = self.a;
        let b = o.a;
        Matrix2::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, o: Matrix2) -> Matrix2 {
        self + o.scale(c(-1.0, 0.0))
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, o: Matrix2) -> Matrix2 {
        let a = self.a;
        let b = o.a;
        Matrix2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

fn conjugator() -> Matrix2 {
    let s = c(FRAC_1_SQRT_2, 0.0);
    Matrix2::new(s, c(0.0, FRAC_1_SQRT_2), c(0.0, FRAC_1_SQRT_2), s)
}

fn on_cut(eta: C) -> bool {
    eta.im == 0.0 && eta.re.abs() <= 1.0
}

/// `R(η) = (η+1)·√((η-1)/(η+1))`, so `R² = η² - 1` and `R = η - ½η⁻¹ + O(η⁻³)`.
pub fn r_toy(eta: C) -> Result<C> {
    if on_cut(eta) {
        return Err(Error::OnCut);
    }
    Ok((eta + 1.0) * ((eta - 1.0) / (eta + 1.0)).sqrt())
}

/// `A·((η-1)/(η+1))^{σ₃/4}·A⁻¹·e^{-iz(η-R(η))σ₃}`.
pub fn toy_solution(eta: C, z: C) -> Result<Matrix2> {
    let r_eta = r_toy(eta)?;
    let q = ((eta - 1.0) / (eta + 1.0)).powf(0.25);
    let a = conjugator();
    let phase = (-c(0.0, 1.0) * z * (eta - r_eta)).exp();
    Ok(a * Matrix2::diag(q, 1.0 / q) * a.inverse() * Matrix2::diag(phase, 1.0 / phase))
}

pub fn toy_jump(eta: f64, z: C) -> Matrix2 {
    let e = (c(0.0, 2.0) * z * eta).exp();
    Matrix2::new(c(0.0, 0.0), e, -1.0 / e, c(0.0, 0.0))
}

/// `‖N₊ - N₋J‖` with boundary values `2N(η±iδ) - N(η±2iδ)`.
pub fn toy_jump_residual(eta: f64, z: C) -> Result<f64> {
    if eta.abs() >= 1.0 {
        return Err(Error::InvalidIndex(format!("η = {eta} is not inside the cut")));
    }
    let d = JUMP_DELTA;
    let side = |s: f64| -> Result<Matrix2> {
        let n1 = toy_solution(c(eta, s * d), z)?;
        let n2 = toy_solution(c(eta, 2.0 * s * d), z)?;
        Ok(n1.scale(c(2.0, 0.0)) - n2)
    };
    let plus = side(1.0)?;
    let minus = side(-1.0)?;
    Ok((plus - minus * toy_jump(eta, z)).norm())
}

/// `N^{(k)}(z)` in `N = I + Σ N^{(k)} η^{-k}`, by the trapezoid rule on `|η| = 3`.
pub fn toy_laurent_coefficient(k: u32, z: C) -> Result<Matrix2> {
    if k == 0 {
        return Err(Error::InvalidIndex("coefficient index must be at least 1".into()));
    }
    let m = CONTOUR_POINTS;
    let mut acc = Matrix2::new(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
    for j in 0..m {
        let eta = C::from_polar(CONTOUR_RADIUS, 2.0 * PI * j as f64 / m as f64);
        acc = acc + toy_solution(eta, z)?.scale(eta.powu(k));
    }
    let out = acc.scale(c(1.0 / m as f64, 0.0));
    if out.a.iter().flatten().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::QuadratureFailure(f64::INFINITY));
    }
    Ok(out)
}

/// `R(η)·N σ₃ N⁻¹`.
pub fn toy_g(eta: C, z: C) -> Result<Matrix2> {
    let n = toy_solution(eta, z)?;
    Ok((n * Matrix2::sigma3() * n.inverse()).scale(r_toy(eta)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    /// `|4 N₁₂ N₂₁ - 1|`.
    pub product: f64,
    /// `max ‖G - (ησ₃ + [N^{(1)}, σ₃])‖` over the sample points.
    pub g_form: f64,
    /// `max ‖G² - (η²-1)I‖`.
    pub g_square: f64,
}

pub const IDENTITY_TOL: f64 = 1e-9;

/// Checks the three identities for a given first coefficient `n1`.
pub fn identity_check_with(n1: &Matrix2, z: C, tol: f64) -> Result<IdentityReport> {
    let s3 = Matrix2::sigma3();
    let product = (4.0 * n1.a[0][1] * n1.a[1][0] - 1.0).norm();
    let comm = *n1 * s3 - s3 * *n1;
    let mut rng = StdRng::seed_from_u64(0x7a);
    let mut g_form = 0.0f64;
    let mut g_square = 0.0f64;
    for _ in 0..5 {
        let eta = C::from_polar(rng.gen_range(1.5..4.0), rng.gen_range(-PI..PI));
        let g = toy_g(eta, z)?;
        let model = s3.scale(eta) + comm;
        g_form = g_form.max((g - model).norm() / eta.norm());
        g_square = g_square.max((g * g - Matrix2::identity().scale(eta * eta - 1.0)).norm() / eta.norm_sqr());
    }
    let rep = IdentityReport { product, g_form, g_square };
    for (name, v) in [("4·N12·N21 = 1", product), ("G = ησ3 + [N1, σ3]", g_form), ("G² = (η²-1)I", g_square)] {
        if v.is_nan() || v > tol {
            return Err(Error::IdentityViolation(format!("{name}: defect {v:e}")));
        }
    }
    Ok(rep)
}

pub fn toy_identity_check(z: C) -> Result<IdentityReport> {
    identity_check_with(&toy_laurent_coefficient(1, z)?, z, IDENTITY_TOL)
}

/// Central-difference check of `dN₁₁/dz = -i/2 = -2i N₁₂N₂₁` and `dN₂₂/dz = i/2`.
pub fn toy_ode_residual(z: C, dz: f64) -> Result<f64> {
    let p = toy_laurent_coefficient(1, z + dz)?;
    let m = toy_laurent_coefficient(1, z - dz)?;
    let n1 = toy_laurent_coefficient(1, z)?;
    let d11 = (p.a[0][0] - m.a[0][0]) / (2.0 * dz);
    let d22 = (p.a[1][1] - m.a[1][1]) / (2.0 * dz);
    let product_form = -2.0 * c(0.0, 1.0) * n1.a[0][1] * n1.a[1][0];
    Ok((d11 - c(0.0, -0.5)).norm().max((d22 - c(0.0, 0.5)).norm()).max((d11 - product_form).norm()))
}

/// `q = 2i N^{(1)}_{12}(z)`.
pub fn toy_nls_amplitude(z: C) -> Result<C> {
    Ok(c(0.0, 2.0) * toy_laurent_coefficient(1, z)?.a[0][1])
}

/// `max_d ‖N(η)‖·|η∓1|^{1/4}` along rays into `±1`, at distances `10⁻²…10⁻⁶`.
pub fn endpoint_growth(z: C) -> Result<f64> {
    let mut worst = 0.0f64;
    for end in [1.0, -1.0] {
        for k in 2..=6 {
            let d = 10f64.powi(-k);
            let eta = c(end, 0.0) + C::from_polar(d, if end > 0.0 { PI / 3.0 } else { 2.0 * PI / 3.0 });
            worst = worst.max(toy_solution(eta, z)?.norm() * d.powf(0.25));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_coefficient_closed_form() {
        let z = c(2.0, 0.0);
        let n1 = toy_laurent_coefficient(1, z).unwrap();
        assert!((n1.a[0][0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((n1.a[1][1] - c(0.0, 1.0)).norm() < 1e-12);
        assert!((n1.a[0][1] - c(0.0, 0.5)).norm() < 1e-12);
        assert!((n1.a[1][0] - c(0.0, -0.5)).norm() < 1e-12);
        assert!((toy_nls_amplitude(z).unwrap() - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn poisoned_coefficient_is_rejected() {
        let z = c(0.5, 0.0);
        let mut n1 = toy_laurent_coefficient(1, z).unwrap();
        n1.a[0][1] += 1e-3;
        assert!(matches!(identity_check_with(&n1, z, IDENTITY_TOL), Err(Error::IdentityViolation(_))));
    }

    #[test]
    fn jump_and_determinant() {
        for eta in [-0.9, 0.0, 0.9] {
            assert!(toy_jump_residual(eta, c(1.0, 1.0)).unwrap() < 1e-7);
        }
        let d = toy_solution(c(0.3, 2.0), c(1.0, -0.5)).unwrap().det();
        assert!((d - 1.0).norm() < 1e-12);
    }
}
