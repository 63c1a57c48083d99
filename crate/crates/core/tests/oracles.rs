//! Values frozen from independent computations: exact rational recurrences in
//! Python `fractions`, 50-digit `mpmath` evaluation, and a separate scipy
//! solver for the Boutroux conditions.

use std::f64::consts::PI;
use std::path::PathBuf;

use pd7kit::boutroux::{bowtie_boundary, solve_c1, solve_c1_real};
use pd7kit::solution::AlgebraicSolution;
use pd7kit::verify::{residual_first_order, residual_second_order};
use pd7kit::{ohyama, LaurentPoly, C};

fn init() {
    ohyama::init_shared(Some(PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("pd7cache")));
}

#[test]
fn ohyama_matches_fraction_oracle() {
    init();
    let data: serde_json::Value = serde_json::from_str(include_str!("data/ohyama_oracle.json")).unwrap();
    let table = data.as_object().unwrap();
    assert_eq!(table.len(), 8);
    for (n, terms) in table {
        let n: i64 = n.parse().unwrap();
        let want = LaurentPoly::from_json(terms).unwrap();
        assert_eq!(ohyama::compute(n).unwrap(), want, "R_{n}");
    }
}

#[test]
fn u_matches_mpmath() {
    init();
    let cases = [
        (5, C::new(2.0, 1.0), C::new(-1.5377693546065539, -3.050972725638474)),
        (12, C::new(0.5, -3.0), C::new(0.018861253265380183, -0.743790758796683)),
        (19, C::new(-4.0, 0.25), C::new(0.052665932417494955, 2.178440139527369)),
        (-7, C::new(1.5, 2.0), C::new(1.3788117500053883, 0.06300755798209067)),
    ];
    for (n, x, want) in cases {
        let got = AlgebraicSolution::new(n).unwrap().eval_u(x).unwrap();
        assert!((got - want).norm() <= 1e-12 * want.norm(), "n={n}: {got} vs {want}");
    }
}

#[test]
fn c1_on_the_real_axis() {
    for (y, c1) in [(0.05, -0.0421639256), (0.15, -0.12057400565), (0.25, -0.18783153235)] {
        let b = solve_c1_real(y).unwrap();
        assert!((b.c1.re - c1).abs() < 2e-10, "y={y}: {}", b.c1.re);
        assert!(b.c1.im == 0.0);
    }
}

#[test]
fn c1_off_the_axis() {
    let b = solve_c1(C::from_polar(0.15, PI / 8.0)).unwrap();
    assert!((b.c1 - C::new(-0.123539338, 0.013353538)).norm() < 2e-9, "{}", b.c1);
    let conj = solve_c1(C::from_polar(0.15, -PI / 8.0)).unwrap();
    assert!((conj.c1 - b.c1.conj()).norm() < 1e-10);
}

#[test]
fn bowtie_radii() {
    for (arg, r) in [(0.0, 0.291775), (0.3, 0.29468), (0.6, 0.30361), (1.0, 0.32616), (1.4, 0.36371)] {
        let got = bowtie_boundary(arg, 1e-7).unwrap().norm();
        assert!((got - r).abs() < 2e-5, "arg={arg}: {got}");
    }
}

#[test]
fn pointwise_residuals_decrease() {
    init();
    let y = C::new(0.15, 0.0);
    let b = solve_c1(y).unwrap();
    let mut first = Vec::new();
    let mut second = Vec::new();
    for n in [8, 16, 32] {
        let s = AlgebraicSolution::new(n).unwrap();
        first.push(residual_first_order(&s, y, C::new(0.3, 0.0), &b).unwrap().norm());
        second.push(residual_second_order(&s, y, C::new(0.2, 0.0)).unwrap().norm());
    }
    assert!(first.windows(2).all(|w| w[1] < w[0]), "{first:?}");
    assert!(second.windows(2).all(|w| w[1] < w[0]), "{second:?}");
}
