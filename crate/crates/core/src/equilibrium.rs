//! The constant branch `8U³ + 2U - y = 0`, Weierstrass invariants and the two
//! forms of the limiting ODE.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::laurent::Rational;
use crate::solution::cbrt_principal;
use crate::C;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumBranch {
    pub y: C,
    pub u: C,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeierstrassInvariants {
    pub g2: C,
    pub g3: C,
    pub E: C,
    pub y: C,
}

pub fn cubic_value(u: C, y: C) -> C {
    8.0 * u * u * u + 2.0 * u - y
}

/// The three roots of `8U³ + 2U - y`, Newton-polished.
pub fn cubic_roots(y: C) -> [C; 3] {
    // depressed cubic U³ + pU + q with p = 1/4, q = -y/8
    let p = C::new(0.25, 0.0);
    let q = -y / 8.0;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut a = cbrt_principal(-q / 2.0 + disc);
    if a.norm() < 1e-300 {
        a = cbrt_principal(-q / 2.0 - disc);
    }
    let w = C::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut out = [C::new(0.0, 0.0); 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let ak = a * w.powi(k as i32);
        let mut u = if ak.norm() > 0.0 { ak - p / (3.0 * ak) } else { ak };
        for _ in 0..3 {
            let f = cubic_value(u, y);
            let d = 24.0 * u * u + 2.0;
            if d.norm() == 0.0 {
                break;
            }
            u -= f / d;
        }
        *slot = u;
    }
    out
}

/// Root continued from `U ≈ ½y^{1/3}` at `|y| = 10` along the radial segment to `y`.
pub fn solve_equilibrium(y: C) -> Result<EquilibriumBranch> {
    if y == C::new(0.0, 0.0) {
        return Err(Error::InvalidIndex("y must be nonzero".into()));
    }
    let r = y.norm();
    let dir = y / r;
    let r0 = r.max(10.0);
    let pick = |yy: C, target: C| -> Result<C> {
        let mut roots = cubic_roots(yy);
        roots.sort_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()));
        let gap = (roots[0] - roots[1]).norm();
        let d0 = (roots[0] - target).norm();
        let d1 = (roots[1] - target).norm();
        if gap < 1e-6 || d1 - d0 < 1e-9 {
            return Err(Error::BranchAmbiguity(format!("root collision near y = {yy}")));
        }
        Ok(roots[0])
    };
    let y0 = dir * r0;
    let mut u = pick(y0, 0.5 * cbrt_principal(y0))?;
    let steps = ((r0 - r) / 1e-2).ceil() as usize;
    for k in 1..=steps {
        let rk = r0 - (r0 - r) * k as f64 / steps as f64;
        u = pick(dir * rk, u)?;
    }
    Ok(EquilibriumBranch { y, u })
}

#[allow(non_snake_case)]
pub fn invariants_from_E(y: C, E: C) -> WeierstrassInvariants {
    let y2 = y * y;
    WeierstrassInvariants {
        g2: 16.0 / y2 + E * E / 3.0,
        g3: -16.0 / y2 - 8.0 * E / (3.0 * y2) - E * E * E / 27.0,
        E,
        y,
    }
}

/// `U'² - [(16/y)U³ + 2EU² - (4/y)U + 1]`.
#[allow(non_snake_case)]
pub fn first_order_residual(u: C, du: C, y: C, E: C) -> C {
    du * du - ((16.0 / y) * u * u * u + 2.0 * E * u * u - (4.0 / y) * u + 1.0)
}

/// `U'' - [U'²/U + (8/y)U² + 2/y - 1/U]`.
pub fn second_order_residual(u: C, du: C, d2u: C, y: C) -> Result<C> {
    if u == C::new(0.0, 0.0) {
        return Err(Error::DivisionByZero);
    }
    Ok(d2u - (du * du / u + (8.0 / y) * u * u + 2.0 / y - 1.0 / u))
}

/// Sparse polynomial with rational coefficients in three symbols, integer
/// (possibly negative) exponents.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly3 {
    pub terms: BTreeMap<[i64; 3], Rational>,
}

impl Poly3 {
    pub fn constant(c: Rational) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(e: [i64; 3], c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly3 { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Poly3) -> Poly3 {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let v = terms.entry(*e).or_insert_with(Rational::zero);
            *v += c;
            if v.is_zero() {
                terms.remove(e);
            }
        }
        Poly3 { terms }
    }

    pub fn neg(&self) -> Poly3 {
        Poly3 { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn sub(&self, o: &Poly3) -> Poly3 {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly3) -> Poly3 {
        let mut out = Poly3::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out = out.add(&Poly3::monomial(e, ca * cb));
            }
        }
        out
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn mono(c: Rational, e: [i64; 3]) -> Poly3 {
    Poly3::monomial(e, c)
}

/// Substitutes `U = ¼y℘ - yE/24`, `U' = ¼y℘'` and `℘'² = 4℘³ - g₂℘ - g₃` into
/// the first-order equation. Symbols are `(℘, y, E)`; an empty result means
/// the identity holds coefficient by coefficient.
pub fn weierstrass_identity_defect() -> Poly3 {
    let wp = mono(q(1, 1), [1, 0, 0]);
    let e = mono(q(1, 1), [0, 0, 1]);
    let y_inv = mono(q(1, 1), [0, -1, 0]);
    let g2 = mono(q(16, 1), [0, -2, 0]).add(&mono(q(1, 3), [0, 0, 2]));
    let g3 = mono(q(-16, 1), [0, -2, 0]).add(&mono(q(-8, 3), [0, -2, 1])).add(&mono(q(-1, 27), [0, 0, 3]));
    let u = mono(q(1, 4), [0, 1, 0]).mul(&wp).sub(&mono(q(1, 24), [0, 1, 1]));
    let wp3 = wp.mul(&wp).mul(&wp);
    let wp_prime_sq = mono(q(4, 1), [0, 0, 0]).mul(&wp3).sub(&g2.mul(&wp)).sub(&g3);
    let lhs = mono(q(1, 16), [0, 2, 0]).mul(&wp_prime_sq);
    let u2 = u.mul(&u);
    let rhs = mono(q(16, 1), [0, 0, 0])
        .mul(&y_inv)
        .mul(&u2)
        .mul(&u)
        .add(&mono(q(2, 1), [0, 0, 0]).mul(&e).mul(&u2))
        .sub(&mono(q(4, 1), [0, 0, 0]).mul(&y_inv).mul(&u))
        .add(&Poly3::constant(q(1, 1)));
    lhs.sub(&rhs)
}

/// Differentiating the first-order equation gives `U'' = (24/y)U² + 2EU - 2/y`;
/// eliminating `U'²` from the second-order equation must give the same.
/// Symbols are `(U, y, E)`; returns the difference of the two expressions for `U·U''`.
pub fn second_order_consistency_defect() -> Poly3 {
    let u = |c: Rational, e: [i64; 3]| mono(c, e);
    let from_first = u(q(24, 1), [3, -1, 0]).add(&u(q(2, 1), [2, 0, 1])).add(&u(q(-2, 1), [1, -1, 0]));
    let du_sq = u(q(16, 1), [3, -1, 0])
        .add(&u(q(2, 1), [2, 0, 1]))
        .add(&u(q(-4, 1), [1, -1, 0]))
        .add(&u(q(1, 1), [0, 0, 0]));
    let from_second = du_sq.add(&u(q(8, 1), [3, -1, 0])).add(&u(q(2, 1), [1, -1, 0])).add(&u(q(-1, 1), [0, 0, 0]));
    from_first.sub(&from_second)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_identities() {
        assert!(weierstrass_identity_defect().is_zero());
        assert!(second_order_consistency_defect().is_zero());
    }

    #[test]
    fn invariants_plug_in() {
        let w = invariants_from_E(C::new(2.0, 0.0), C::new(0.0, 0.0));
        assert!((w.g2 - C::new(4.0, 0.0)).norm() < 1e-15);
        assert!((w.g3 - C::new(-4.0, 0.0)).norm() < 1e-15);
        let w = invariants_from_E(C::new(4.0, 0.0), C::new(3.0, 0.0));
        assert!((w.g2 - C::new(4.0, 0.0)).norm() < 1e-15);
        assert!((w.g3 - C::new(-2.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn large_y_branch() {
        let b = solve_equilibrium(C::new(1e3, 0.0)).unwrap();
        assert!((b.u.re - 5.0).abs() < 0.1 && b.u.im.abs() < 1e-12);
        assert!(cubic_value(b.u, b.y).norm() < 1e-13 * 1e3);
    }

    #[test]
    fn stationary_point_has_zero_second_order_residual() {
        let b = solve_equilibrium(C::new(0.7, 0.4)).unwrap();
        let r = second_order_residual(b.u, C::new(0.0, 0.0), C::new(0.0, 0.0), b.y).unwrap();
        assert!(r.norm() < 1e-12);
        assert_eq!(
            second_order_residual(C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0), b.y),
            Err(Error::DivisionByZero)
        );
    }
}
