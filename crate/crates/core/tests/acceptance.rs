//! One test per acceptance criterion; tolerances live in `pd7kit::selftest`.

use std::path::PathBuf;

use pd7kit::{ohyama, selftest};

fn check(id: u32) {
    ohyama::init_shared(Some(PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("pd7cache")));
    let r = selftest::run(id).unwrap();
    println!("{}", r.line());
    assert!(r.passed, "{}", r.line());
}

#[test]
fn c01_ohyama_exactness() {
    check(1);
}

#[test]
fn c02_closed_form_solutions() {
    check(2);
}

#[test]
fn c03_painleve_ode_residual() {
    check(3);
}

#[test]
fn c04_boutroux_real_seed() {
    check(4);
}

#[test]
fn c05_critical_value() {
    check(5);
}

#[test]
fn c06_large_c_asymptotic() {
    check(6);
}

#[test]
fn c07_jacobian() {
    check(7);
}

#[test]
fn c08_level_set_structure() {
    check(8);
}

#[test]
fn c09_phase_reality() {
    check(9);
}

#[test]
fn c10_large_n_limit() {
    check(10);
}

#[test]
fn c11_curve_cubic_identity() {
    check(11);
}

#[test]
fn c12_weierstrass_reduction() {
    check(12);
}

#[test]
fn c13_toy_rhp_suite() {
    check(13);
}

#[test]
fn c14_bow_tie_pole_cloud() {
    check(14);
}
