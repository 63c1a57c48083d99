//! The algebraic solutions `u_n(x) = R_{n+1}R_{n-1} / (2√3 R_n²)` evaluated at
//! `ζ = √3 x^{1/3}`, their rescalings and exact derivatives.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bigfloat::Scaled;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::ohyama;
use crate::C;

/// Default pole test: `|R_n|² < POLE_TOL · |R_{n+1} R_{n-1}|`.
pub const POLE_TOL: f64 = 1e-24;

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone)]
pub struct AlgebraicSolution {
    pub n: i64,
    pub r_minus: LaurentPoly,
    pub r: LaurentPoly,
    pub r_plus: LaurentPoly,
    pub dr_minus: LaurentPoly,
    pub dr: LaurentPoly,
    pub dr_plus: LaurentPoly,
    d2r_minus: LaurentPoly,
    d2r: LaurentPoly,
    d2r_plus: LaurentPoly,
    pub pole_tol: f64,
}

/// `u` and its first two derivatives with respect to the evaluation variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub u: C,
    pub du: C,
    pub d2u: C,
}

/// Values of `R_{n+1}, R_n, R_{n-1}` and derivatives at one `ζ`.
struct Samples {
    v: [Scaled; 3],
    d1: [Scaled; 3],
    d2: [Scaled; 3],
}

/// Principal `x^{1/3}`.
pub fn cbrt_principal(x: C) -> C {
    if x == C::new(0.0, 0.0) {
        return x;
    }
    (x.ln() / 3.0).exp()
}

/// `ζ = √3 x^{1/3}` on the principal branch.
pub fn zeta_of_x(x: C) -> C {
    cbrt_principal(x) * SQRT3
}

#[allow(non_snake_case)]
impl AlgebraicSolution {
    pub fn new(n: i64) -> Result<Self> {
        let r_minus = ohyama::compute(n - 1)?;
        let r = ohyama::compute(n)?;
        let r_plus = ohyama::compute(n + 1)?;
        Ok(Self::from_polys(n, r_minus, r, r_plus))
    }

    pub fn from_polys(n: i64, r_minus: LaurentPoly, r: LaurentPoly, r_plus: LaurentPoly) -> Self {
        let dr_minus = r_minus.derivative();
        let dr = r.derivative();
        let dr_plus = r_plus.derivative();
        AlgebraicSolution {
            n,
            d2r_minus: dr_minus.derivative(),
            d2r: dr.derivative(),
            d2r_plus: dr_plus.derivative(),
            r_minus,
            r,
            r_plus,
            dr_minus,
            dr,
            dr_plus,
            pole_tol: POLE_TOL,
        }
    }

    fn sample(&self, zeta: C, order: usize) -> Result<Samples> {
        let ev = |p: &LaurentPoly| -> Result<Scaled> { Ok(p.eval_precise(zeta)?.value) };
        let v = [ev(&self.r_plus)?, ev(&self.r)?, ev(&self.r_minus)?];
        let zero = [Scaled::ZERO; 3];
        let d1 = if order >= 1 { [ev(&self.dr_plus)?, ev(&self.dr)?, ev(&self.dr_minus)?] } else { zero };
        let d2 = if order >= 2 { [ev(&self.d2r_plus)?, ev(&self.d2r)?, ev(&self.d2r_minus)?] } else { zero };
        Ok(Samples { v, d1, d2 })
    }

    fn check_pole(&self, s: &Samples) -> Result<()> {
        let lb = s.v[1].log2_abs();
        let lac = s.v[0].log2_abs() + s.v[2].log2_abs();
        if !lb.is_finite() || 2.0 * lb < lac + self.pole_tol.log2() {
            return Err(Error::PoleHit);
        }
        Ok(())
    }

    /// `F_n(ζ)` and its ζ-derivatives up to `order` (0, 1 or 2).
    pub fn jet_zeta(&self, zeta: C, order: usize) -> Result<Jet> {
        if zeta == C::new(0.0, 0.0) {
            return Err(Error::PoleAtZero);
        }
        let s = self.sample(zeta, order)?;
        self.check_pole(&s)?;
        let num = s.v[0].mul(&s.v[2]);
        let u = num.div(&s.v[1].mul(&s.v[1])).to_c() / (2.0 * SQRT3);
        if order == 0 {
            return Ok(Jet { u, du: C::new(0.0, 0.0), d2u: C::new(0.0, 0.0) });
        }
        if s.v[0].is_zero() || s.v[2].is_zero() {
            return Err(Error::ZeroHit);
        }
        let ratio = |a: &Scaled, b: &Scaled| a.div(b).to_c();
        let la = ratio(&s.d1[0], &s.v[0]);
        let lb = ratio(&s.d1[1], &s.v[1]);
        let lc = ratio(&s.d1[2], &s.v[2]);
        let l = la + lc - 2.0 * lb;
        let du = u * l;
        if order == 1 {
            return Ok(Jet { u, du, d2u: C::new(0.0, 0.0) });
        }
        let dl = (ratio(&s.d2[0], &s.v[0]) - la * la) + (ratio(&s.d2[2], &s.v[2]) - lc * lc)
            - 2.0 * (ratio(&s.d2[1], &s.v[1]) - lb * lb);
        Ok(Jet { u, du, d2u: u * (l * l + dl) })
    }

    /// `u_n(x)` with x-derivatives up to `order`.
    pub fn jet_x(&self, x: C, order: usize) -> Result<Jet> {
        if x == C::new(0.0, 0.0) {
            return Err(Error::PoleAtZero);
        }
        let zeta = zeta_of_x(x);
        let j = self.jet_zeta(zeta, order)?;
        let zx = zeta / (3.0 * x);
        let zxx = -2.0 * zeta / (9.0 * x * x);
        Ok(Jet { u: j.u, du: j.du * zx, d2u: j.d2u * zx * zx + j.du * zxx })
    }

    pub fn eval_u(&self, x: C) -> Result<C> {
        Ok(self.jet_x(x, 0)?.u)
    }

    pub fn eval_du_dx(&self, x: C) -> Result<C> {
        Ok(self.jet_x(x, 1)?.du)
    }

    pub fn eval_d2u_dx2(&self, x: C) -> Result<C> {
        Ok(self.jet_x(x, 2)?.d2u)
    }

    fn scale_index(&self) -> Result<f64> {
        if self.n <= 0 {
            return Err(Error::InvalidIndex(format!("rescaling needs n ≥ 1, got {}", self.n)));
        }
        Ok(self.n as f64)
    }

    /// `U_n(y) = n^{-1/2} u_n(n^{3/2} y)`.
    pub fn eval_U(&self, y: C) -> Result<C> {
        let nf = self.scale_index()?;
        Ok(self.eval_u(y * nf.powf(1.5))? / nf.sqrt())
    }

    /// `W(z) = U_n(y + z/n)`.
    pub fn eval_U_shifted(&self, y: C, z: C) -> Result<C> {
        let nf = self.scale_index()?;
        self.eval_U(y + z / nf)
    }

    /// `W`, `dW/dz`, `d²W/dz²` at `U_n(y + z/n)`.
    pub fn jet_shifted(&self, y: C, z: C, order: usize) -> Result<Jet> {
        let nf = self.scale_index()?;
        let x = (y + z / nf) * nf.powf(1.5);
        let j = self.jet_x(x, order)?;
        Ok(Jet { u: j.u / nf.sqrt(), du: j.du, d2u: j.d2u * nf.sqrt() })
    }

    pub fn eval_dU_dz(&self, y: C, z: C) -> Result<C> {
        Ok(self.jet_shifted(y, z, 1)?.du)
    }

    /// `u'' - [(u')²/u - u'/x + (8u² + 2n)/x - 1/u]`.
    pub fn ode_residual_p3d7(&self, x: C) -> Result<C> {
        Ok(self.ode_residual_parts(x)?.0)
    }

    /// Residual divided by the sum of the moduli of the terms in the equation.
    pub fn ode_residual_relative(&self, x: C) -> Result<f64> {
        let (r, scale) = self.ode_residual_parts(x)?;
        Ok(r.norm() / scale)
    }

    fn ode_residual_parts(&self, x: C) -> Result<(C, f64)> {
        let j = self.jet_x(x, 2)?;
        if j.u == C::new(0.0, 0.0) {
            return Err(Error::ZeroHit);
        }
        let terms = [
            j.du * j.du / j.u,
            -j.du / x,
            (8.0 * j.u * j.u + 2.0 * self.n as f64) / x,
            -1.0 / j.u,
        ];
        let rhs: C = terms.iter().sum();
        let scale = j.d2u.norm() + terms.iter().map(|t| t.norm()).sum::<f64>();
        Ok((j.d2u - rhs, scale))
    }
}

/// `±i u_n(±ix) = u_{-n}(e^{±2πi}x)`, read on the ζ-plane as
/// `±i F_n(e^{±iπ/6}ζ) = F_{-n}(e^{±2πi/3}ζ)`; both signs within `rel_tol`.
pub fn check_symmetry(n: i64, x: C, rel_tol: f64) -> Result<bool> {
    let a = AlgebraicSolution::new(n)?;
    let b = AlgebraicSolution::new(-n)?;
    let zeta = zeta_of_x(x);
    for sign in [1.0, -1.0] {
        let lhs = C::new(0.0, sign) * a.jet_zeta(zeta * C::from_polar(1.0, sign * PI / 6.0), 0)?.u;
        let rhs = b.jet_zeta(zeta * C::from_polar(1.0, sign * 2.0 * PI / 3.0), 0)?.u;
        if (lhs - rhs).norm() > rel_tol * rhs.norm().max(lhs.norm()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Bounds {
    pub fn square(h: f64) -> Self {
        Bounds { re_min: -h, re_max: h, im_min: -h, im_max: h }
    }
}

/// Samples of a real field on a rectangular grid; row-major in the imaginary direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    pub bounds: Bounds,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl GridField {
    pub fn point(&self, i: usize, j: usize) -> C {
        let b = &self.bounds;
        let t = |k: usize, m: usize| if m > 1 { k as f64 / (m - 1) as f64 } else { 0.5 };
        C::new(b.re_min + (b.re_max - b.re_min) * t(i, self.nx), b.im_min + (b.im_max - b.im_min) * t(j, self.ny))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// Grid points whose value is infinite or a strict local maximum above `threshold`.
    pub fn peaks(&self, threshold: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.ny {
            for i in 0..self.nx {
                let v = self.get(i, j);
                if v.is_infinite() {
                    out.push((i, j));
                    continue;
                }
                if v < threshold || i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny {
                    continue;
                }
                let is_max = (-1i64..=1)
                    .flat_map(|di| (-1i64..=1).map(move |dj| (di, dj)))
                    .filter(|&d| d != (0, 0))
                    .all(|(di, dj)| self.get((i as i64 + di) as usize, (j as i64 + dj) as usize) < v);
                if is_max {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn to_csv(&self, header: &str) -> String {
        let mut s = format!("{header}\n");
        for j in 0..self.ny {
            for i in 0..self.nx {
                let p = self.point(i, j);
                let v = self.get(i, j);
                let vs = if v.is_infinite() { "inf".to_string() } else { format!("{v:?}") };
                s.push_str(&format!("{:?},{:?},{}\n", p.re, p.im, vs));
            }
        }
        s
    }
}

/// `|U_n(Y³)|` over a rectangle of the Y-plane, with `ζ = √3 √n Y` so that the
/// whole Riemann surface of `y^{1/3}` is covered. For `n = 0` the field is `|½Y|`.
pub fn density_grid(n: i64, bounds: Bounds, nx: usize, ny: usize) -> Result<GridField> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidIndex("grid resolution must be at least 2×2".into()));
    }
    let sol = AlgebraicSolution::new(n)?;
    let mut g = GridField { bounds, nx, ny, values: vec![0.0; nx * ny] };
    let (zscale, uscale) = if n > 0 {
        let nf = n as f64;
        (SQRT3 * nf.sqrt(), 1.0 / nf.sqrt())
    } else {
        (SQRT3, 1.0)
    };
    for j in 0..ny {
        for i in 0..nx {
            let y = g.point(i, j);
            let v = match sol.jet_zeta(y * zscale, 0) {
                Ok(jet) => jet.u.norm() * uscale,
                Err(Error::PoleHit) => f64::INFINITY,
                Err(Error::PoleAtZero) => {
                    if sol.r.min_exp().unwrap_or(0) > 0 {
                        f64::INFINITY
                    } else {
                        0.0
                    }
                }
                Err(e) => return Err(e),
            };
            g.values[j * nx + i] = v;
        }
    }
    Ok(g)
}

/// Newton refinement of a zero of `R_n(√3√n Y)` in the Y-plane.
pub fn refine_pole(sol: &AlgebraicSolution, y0: C, tol: f64) -> Result<C> {
    let zscale = if sol.n > 0 { SQRT3 * (sol.n as f64).sqrt() } else { SQRT3 };
    let mut zeta = y0 * zscale;
    for _ in 0..60 {
        let v = sol.r.eval_precise(zeta)?.value;
        let d = sol.dr.eval_precise(zeta)?.value;
        if v.is_zero() {
            break;
        }
        let step = v.div(&d).to_c();
        zeta -= step;
        if step.norm() < tol * zeta.norm().max(1.0) {
            break;
        }
    }
    Ok(zeta / zscale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C, b: C, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn low_index_closed_forms() {
        let s0 = AlgebraicSolution::new(0).unwrap();
        assert!(close(s0.eval_u(C::new(8.0, 0.0)).unwrap(), C::new(1.0, 0.0), 1e-14));
        assert!(close(s0.eval_du_dx(C::new(1.0, 0.0)).unwrap(), C::new(1.0 / 6.0, 0.0), 1e-14));
        let s1 = AlgebraicSolution::new(1).unwrap();
        assert!(s1.eval_u(C::new(1.0 / (3.0 * SQRT3), 0.0)).unwrap().norm() < 1e-15);
        assert!(close(s1.eval_U(C::new(1.0, 0.0)).unwrap(), C::new(1.0 / 3.0, 0.0), 1e-14));
        let s2 = AlgebraicSolution::new(2).unwrap();
        assert_eq!(s2.eval_u(C::new(1.0 / (3.0 * SQRT3), 0.0)), Err(Error::PoleHit));
    }

    #[test]
    fn u_zero_has_vanishing_residual() {
        let s0 = AlgebraicSolution::new(0).unwrap();
        assert!(s0.ode_residual_p3d7(C::new(1.0, 0.0)).unwrap().norm() < 1e-12);
    }

    #[test]
    fn shifted_matches_unshifted() {
        let s = AlgebraicSolution::new(10).unwrap();
        let y = C::new(0.15, 0.0);
        let a = s.eval_U_shifted(y, C::new(1.0, 0.0)).unwrap();
        let b = s.eval_U(C::new(0.25, 0.0)).unwrap();
        assert!(close(a, b, 1e-12));
        assert_eq!(s.eval_U_shifted(y, C::new(0.0, 0.0)).unwrap(), s.eval_U(y).unwrap());
    }
}
