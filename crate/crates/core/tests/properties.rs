use std::f64::consts::PI;

use proptest::prelude::*;

use pd7kit::boutroux::{roots_of_P, CurveParams};
use pd7kit::equilibrium::{first_order_residual, invariants_from_E};
use pd7kit::solution::{check_symmetry, AlgebraicSolution};
use pd7kit::toy::{r_toy, toy_g, toy_solution, Matrix2};
use pd7kit::{laurent, LaurentPoly, C};

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-6i64..6, -20i64..20), 0..6).prop_map(LaurentPoly::from_ints)
}

fn point(rmin: f64, rmax: f64) -> impl Strategy<Value = C> {
    (rmin..rmax, -PI + 1e-3..PI - 1e-3).prop_map(|(r, a)| C::from_polar(r, a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!((&a * &b).derivative(), &(&a.derivative() * &b) + &(&a * &b.derivative()));
        if !b.is_zero() {
            prop_assert_eq!(laurent::exact_divide(&(&a * &b), &b).unwrap(), a);
        }
    }

    #[test]
    fn painleve_residual_small(n in 0i64..10, x in point(0.2, 5.0)) {
        let sol = AlgebraicSolution::new(n).unwrap();
        if let Ok(r) = sol.ode_residual_relative(x) {
            prop_assert!(r < 1e-9, "n={} x={} r={}", n, x, r);
        }
    }

    #[test]
    fn rotation_symmetry(n in 1i64..6, x in point(0.3, 3.0)) {
        prop_assert!(check_symmetry(n, x, 1e-9).unwrap());
    }

    #[test]
    fn curve_roots_are_roots(y in point(0.05, 0.3), c in point(0.01, 1.0)) {
        let r = roots_of_P(CurveParams { y, c }).unwrap();
        for s in r.s {
            let v = pd7kit::boutroux::p_value(s, y, c);
            prop_assert!(v.norm() < 1e-10 * (1.0 + s.norm().powi(3)));
        }
    }

    #[test]
    fn toy_unimodular_and_square(eta in point(1.2, 4.0), z in point(0.0, 3.0)) {
        let n = toy_solution(eta, z).unwrap();
        prop_assert!((n.det() - 1.0).norm() < 1e-12);
        let g = toy_g(eta, z).unwrap();
        let diff = g * g - Matrix2::identity().scale(eta * eta - 1.0);
        prop_assert!(diff.norm() < 1e-10 * eta.norm_sqr());
        let r = r_toy(eta).unwrap();
        prop_assert!((r * r - (eta * eta - 1.0)).norm() < 1e-12 * eta.norm_sqr());
    }

    #[test]
    fn weierstrass_substitution(y in point(0.05, 2.0), e in point(0.0, 5.0), p in point(0.1, 10.0)) {
        let w = invariants_from_E(y, e);
        let u = 0.25 * y * p - y * e / 24.0;
        let dp2 = 4.0 * p * p * p - w.g2 * p - w.g3;
        let du = 0.25 * y * dp2.sqrt();
        let r = first_order_residual(u, du, y, e);
        let scale = 1.0 + (16.0 / y * u * u * u).norm() + (2.0 * e * u * u).norm() + du.norm_sqr();
        prop_assert!(r.norm() < 1e-12 * scale, "{}", r);
    }
}
