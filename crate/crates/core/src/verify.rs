//! Numerical check that `W(z) = U_n(y + z/n)` satisfies the limiting
//! first-order equation with `E = -8c₁(y)/y²`, with a residual that decays in `n`.

use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::boutroux::{p_value, BoutrouxSolution};
use crate::equilibrium::{first_order_residual, second_order_residual};
use crate::error::{Error, Result};
use crate::solution::{cbrt_principal, AlgebraicSolution};
use crate::C;

pub const POLE_EXCLUSION: f64 = 0.1;
pub const SLOPE_RANGE: (f64, f64) = (-1.5, -0.5);

/// `W'² - [(16/y)W³ - (16c₁/y²)W² - (4/y)W + 1]`.
pub fn first_order_from_jet(w: C, dw: C, y: C, c1: C) -> C {
    first_order_residual(w, dw, y, -8.0 * c1 / (y * y))
}

pub fn residual_first_order(sol: &AlgebraicSolution, y: C, z: C, b: &BoutrouxSolution) -> Result<C> {
    let j = sol.jet_shifted(y, z, 1)?;
    Ok(first_order_from_jet(j.u, j.du, y, b.c1))
}

/// `W'' - [W'²/W + (8/y)W² + 2/y - 1/W]`.
pub fn residual_second_order(sol: &AlgebraicSolution, y: C, z: C) -> Result<C> {
    let j = sol.jet_shifted(y, z, 2)?;
    if j.u == C::new(0.0, 0.0) {
        return Err(Error::ZeroHit);
    }
    second_order_residual(j.u, j.du, j.d2u, y)
}

/// Largest discrepancy between `-f(iy/(4Ŭ))` and the cubic in `Ŭ`, relative to
/// the sum of the moduli of the cubic's terms, over random `|Ŭ| ∈ [0.05, 5]`.
pub fn curve_cubic_correspondence(b: &BoutrouxSolution, samples: usize, seed: u64) -> f64 {
    let mut rng = StdRng::seed_from_u64(seed);
    let (y, c) = (b.y, b.c1);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let r = 0.05 * 100f64.powf(rng.gen::<f64>());
        let u = C::from_polar(r, rng.gen_range(-PI..PI));
        let eta = C::new(0.0, 1.0) * y / (4.0 * u);
        let mu = -C::new(0.0, 1.0) * eta;
        let lhs = -(p_value(mu, y, c) / (mu * mu * mu));
        let terms = [16.0 / y * u * u * u, -16.0 * c / (y * y) * u * u, -4.0 / y * u, C::new(1.0, 0.0)];
        let rhs: C = terms.iter().sum();
        let scale: f64 = terms.iter().map(|t| t.norm()).sum();
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    worst
}

/// The default sample set: 20 points on `|z| = 0.5` and 10 points of `[-1, 1]`.
pub fn default_z_samples() -> Vec<C> {
    let mut out: Vec<C> = (0..20).map(|k| C::from_polar(0.5, 2.0 * PI * k as f64 / 20.0)).collect();
    out.extend((0..10).map(|k| C::new(-1.0 + 2.0 * k as f64 / 9.0, 0.0)));
    out
}

/// Zero of `R_n` reached by Newton in `ζ` from the sample, mapped back to `z`;
/// abandoned once the iterate strays more than `0.5` from the sample.
fn nearby_pole(sol: &AlgebraicSolution, y: C, z: C) -> Option<C> {
    let nf = sol.n as f64;
    let to_z = |zeta: C| {
        let w = zeta / 3f64.sqrt();
        nf * (w * w * w / nf.powf(1.5) - y)
    };
    let x = (y + z / nf) * nf.powf(1.5);
    let mut zeta = 3f64.sqrt() * cbrt_principal(x);
    for _ in 0..15 {
        let v = sol.r.eval_precise(zeta).ok()?.value;
        if v.is_zero() {
            return Some(to_z(zeta));
        }
        let d = sol.dr.eval_precise(zeta).ok()?.value;
        if d.is_zero() {
            return None;
        }
        let step = v.div(&d).to_c();
        zeta -= step;
        if (to_z(zeta) - z).norm() > 0.5 {
            return None;
        }
        if step.norm() < 1e-12 * zeta.norm() {
            return Some(to_z(zeta));
        }
    }
    None
}

/// Samples whose distance to a zero of `R_n` found from any sample exceeds [`POLE_EXCLUSION`].
pub fn filter_samples(sol: &AlgebraicSolution, y: C, samples: &[C]) -> Vec<C> {
    let poles: Vec<C> = samples.iter().filter_map(|&z| nearby_pole(sol, y, z)).collect();
    samples.iter().cloned().filter(|z| poles.iter().all(|p| (z - p).norm() > POLE_EXCLUSION)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelResult {
    pub n: i64,
    pub samples_used: usize,
    pub max_first_order: f64,
    pub max_second_order: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square deviation of the fit in `log` units.
    pub rms: f64,
    pub monotone: bool,
    pub in_range: bool,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub y: (f64, f64),
    pub E: (f64, f64),
    pub levels: Vec<LevelResult>,
    pub first_order: SlopeFit,
    pub second_order: SlopeFit,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        let ok = |f: &SlopeFit| f.monotone && f.in_range;
        ok(&self.first_order) && ok(&self.second_order)
    }
}

/// Least-squares slope of `log r` against `log n`.
pub fn slope_fit(ns: &[i64], residuals: &[f64]) -> Result<SlopeFit> {
    if ns.len() < 3 || ns.len() != residuals.len() {
        return Err(Error::InsufficientData(format!("{} levels, need at least 3", ns.len())));
    }
    if residuals.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::InsufficientData("residuals must be positive and finite".into()));
    }
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>() / m).sqrt();
    let monotone = residuals.windows(2).all(|w| w[1] < w[0]);
    let in_range = slope >= SLOPE_RANGE.0 && slope <= SLOPE_RANGE.1;
    Ok(SlopeFit { slope, intercept, rms, monotone, in_range })
}

/// Residuals at one level `n`, normalized by `1 + |W'|²`.
pub fn level_residuals(n: i64, b: &BoutrouxSolution, samples: &[C]) -> Result<LevelResult> {
    let sol = AlgebraicSolution::new(n)?;
    let y = b.y;
    let zs = filter_samples(&sol, y, samples);
    let mut first = 0.0f64;
    let mut second = 0.0f64;
    let mut used = 0;
    for z in zs {
        let j = match sol.jet_shifted(y, z, 2) {
            Ok(j) => j,
            Err(Error::PoleHit) | Err(Error::ZeroHit) => continue,
            Err(e) => return Err(e),
        };
        if j.u == C::new(0.0, 0.0) {
            continue;
        }
        let norm = 1.0 + j.du.norm_sqr();
        first = first.max(first_order_from_jet(j.u, j.du, y, b.c1).norm() / norm);
        second = second.max(second_order_residual(j.u, j.du, j.d2u, y)?.norm() / norm);
        used += 1;
    }
    if used == 0 {
        return Err(Error::InsufficientData(format!("every sample at n = {n} is near a pole")));
    }
    Ok(LevelResult { n, samples_used: used, max_first_order: first, max_second_order: second })
}

pub fn verify(b: &BoutrouxSolution, ns: &[i64], samples: &[C]) -> Result<VerificationReport> {
    let levels = ns.iter().map(|&n| level_residuals(n, b, samples)).collect::<Result<Vec<_>>>()?;
    let f1: Vec<f64> = levels.iter().map(|l| l.max_first_order).collect();
    let f2: Vec<f64> = levels.iter().map(|l| l.max_second_order).collect();
    Ok(VerificationReport {
        y: (b.y.re, b.y.im),
        E: (b.E.re, b.E.im),
        first_order: slope_fit(ns, &f1)?,
        second_order: slope_fit(ns, &f2)?,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let f = slope_fit(&[8, 16, 32, 64], &[1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0]).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12 && f.monotone && f.in_range);
        let f = slope_fit(&[8, 16, 32], &[1.0, 1.0, 1.0]).unwrap();
        assert!(f.slope.abs() < 1e-12 && !f.in_range && !f.monotone);
        assert!(matches!(slope_fit(&[8, 16], &[1.0, 0.5]), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn sample_set_shape() {
        let s = default_z_samples();
        assert_eq!(s.len(), 30);
        assert!(s[..20].iter().all(|z| (z.norm() - 0.5).abs() < 1e-15));
    }
}
