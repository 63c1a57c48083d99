//! Adaptive Gauss–Legendre quadrature of complex integrands along parametrized paths.

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};
use crate::C;

const ORDER: usize = 16;
const MAX_DEPTH: usize = 40;
const MAX_PANELS: usize = 20_000;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let gl = GaussLegendre::new(NonZeroUsize::new(ORDER).expect("nonzero order"));
        gl.as_node_weight_pairs().to_vec()
    })
}

fn panel<F: FnMut(f64) -> C>(f: &mut F, a: f64, b: f64) -> C {
    let h = 0.5 * (b - a);
    let m = 0.5 * (a + b);
    rule().iter().map(|&(x, w)| f(m + h * x) * w).sum::<C>() * h
}

/// `∫_a^b f(s) ds` with absolute tolerance `tol·max(1, |I|)`.
pub fn integrate<F: FnMut(f64) -> C>(mut f: F, a: f64, b: f64, tol: f64) -> Result<C> {
    let whole = panel(&mut f, a, b);
    let atol = tol * whole.norm().max(1.0);
    let mut stack = vec![(a, b, whole, 0usize)];
    let mut total = C::new(0.0, 0.0);
    let mut panels = 0usize;
    let mut worst = 0.0f64;
    while let Some((lo, hi, est, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = panel(&mut f, lo, mid);
        let right = panel(&mut f, mid, hi);
        let err = (left + right - est).norm();
        let local = atol * (hi - lo) / (b - a);
        panels += 1;
        if err <= local || depth >= MAX_DEPTH || panels >= MAX_PANELS {
            if err > local {
                worst = worst.max(err);
            }
            total += left + right;
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    if !total.re.is_finite() || !total.im.is_finite() || worst > 1e3 * atol {
        return Err(Error::QuadratureFailure(worst));
    }
    Ok(total)
}

/// A path `t ∈ [0,1] ↦ (μ(t), μ'(t))`.
pub trait Path {
    fn eval(&self, t: f64) -> (C, C);

    fn start(&self) -> C {
        self.eval(0.0).0
    }

    fn end(&self) -> C {
        self.eval(1.0).0
    }
}

/// Logarithmic spiral from `a` to `b` whose argument changes by `sweep`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spiral {
    pub a: C,
    pub b: C,
    pub sweep: f64,
    /// Relative radial bulge `(1 + bulge·sin πt)`; zero for the plain spiral.
    pub bulge: f64,
}

impl Spiral {
    pub fn new(a: C, b: C, sweep: f64) -> Self {
        Spiral { a, b, sweep, bulge: 0.0 }
    }
}

impl Path for Spiral {
    fn eval(&self, t: f64) -> (C, C) {
        let la = self.a.norm().ln();
        let lb = self.b.norm().ln();
        let th = self.a.arg() + self.sweep * t;
        let bump = self.bulge * (PI * t).sin();
        let dbump = self.bulge * PI * (PI * t).cos();
        let lr = la + (lb - la) * t + (1.0 + bump).ln();
        let mu = C::from_polar(lr.exp(), th);
        let dmu = mu * C::new(lb - la + dbump / (1.0 + bump), self.sweep);
        (mu, dmu)
    }
}

/// Quadratic Bézier from `a` to `b`; the control point sits `height·|b-a|` to the left of the chord midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bezier {
    pub a: C,
    pub b: C,
    pub height: f64,
}

impl Bezier {
    fn control(&self) -> C {
        0.5 * (self.a + self.b) + C::new(0.0, self.height) * (self.b - self.a)
    }
}

impl Path for Bezier {
    fn eval(&self, t: f64) -> (C, C) {
        let c = self.control();
        let s = 1.0 - t;
        let mu = s * s * self.a + 2.0 * s * t * c + t * t * self.b;
        let dmu = 2.0 * s * (c - self.a) + 2.0 * t * (self.b - c);
        (mu, dmu)
    }
}

/// Straight segment from `a` to `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: C,
    pub b: C,
}

impl Path for Segment {
    fn eval(&self, t: f64) -> (C, C) {
        (self.a + (self.b - self.a) * t, self.b - self.a)
    }
}

/// `∫ g(μ) dμ` along `path`, with the cosine substitution `t = (1 - cos πs)/2`
/// clustering nodes at both ends where the integrands have square-root behaviour.
pub fn path_integral<P: Path + ?Sized, G: FnMut(C) -> C>(path: &P, mut g: G, tol: f64) -> Result<C> {
    integrate(
        |s| {
            let t = 0.5 * (1.0 - (PI * s).cos());
            let dt = 0.5 * PI * (PI * s).sin();
            let (mu, dmu) = path.eval(t);
            g(mu) * dmu * dt
        },
        0.0,
        1.0,
        tol,
    )
}

/// `∫_a^∞ g(μ) dμ` along the ray `a + d·r`, `d` a unit direction, via `r = L·u/(1-u)`.
pub fn ray_integral<G: FnMut(C) -> C>(a: C, d: C, length: f64, mut g: G, tol: f64) -> Result<C> {
    integrate(
        |s| {
            let u = 0.5 * (1.0 - (PI * s).cos());
            let du = 0.5 * PI * (PI * s).sin();
            if u >= 1.0 {
                return C::new(0.0, 0.0);
            }
            let r = length * u / (1.0 - u);
            let dr = length / ((1.0 - u) * (1.0 - u));
            g(a + d * r) * d * dr * du
        },
        0.0,
        1.0,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_sqrt_endpoints() {
        let v = integrate(|x| C::new(x * x, 0.0), 0.0, 3.0, 1e-14).unwrap();
        assert!((v.re - 9.0).abs() < 1e-12);
        let seg = Segment { a: C::new(0.0, 0.0), b: C::new(1.0, 0.0) };
        let v = path_integral(&seg, |m| m.sqrt() * (C::new(1.0, 0.0) - m).sqrt(), 1e-13).unwrap();
        assert!((v.re - PI / 8.0).abs() < 1e-12);
    }

    #[test]
    fn spiral_winds_around_pole() {
        let p = Spiral::new(C::new(1.0, 0.0), C::new(1.0, 0.0), 2.0 * PI);
        let v = path_integral(&p, |m| 1.0 / m, 1e-13).unwrap();
        assert!((v - C::new(0.0, 2.0 * PI)).norm() < 1e-12);
    }

    #[test]
    fn ray_tail() {
        let v = ray_integral(C::new(1.0, 0.0), C::new(0.0, 1.0), 1.0, |m| 1.0 / (m * m), 1e-13).unwrap();
        assert!((v - C::new(1.0, 0.0)).norm() < 1e-11);
    }
}
