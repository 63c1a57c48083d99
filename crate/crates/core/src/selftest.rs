//! The acceptance suite: fourteen numbered checks with pinned tolerances.

use std::f64::consts::PI;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::boutroux::{bowtie_boundary, i12_real, seed_c0, solve_c1, solve_c1_real, BowTie};
use crate::equilibrium::{second_order_consistency_defect, weierstrass_identity_defect};
use crate::error::{Error, Result};
use crate::levelset::{trace_K, CaseTag};
use crate::ohyama;
use crate::solution::{cbrt_principal, density_grid, refine_pole, AlgebraicSolution, Bounds};
use crate::toy;
use crate::verify::{curve_cubic_correspondence, default_z_samples, verify};
use crate::C;

pub const RECURRENCE_RANGE: i64 = 20;
pub const OHYAMA_BUDGET_S: f64 = 10.0;
pub const CLOSED_FORM_TOL: f64 = 1e-12;
pub const ODE_TOL: f64 = 1e-9;
pub const ODE_MAX_N: i64 = 12;
pub const ODE_SAMPLES: usize = 50;
pub const SEED_YS: [f64; 3] = [0.05, 0.15, 0.25];
pub const I12_TOL: f64 = 1e-10;
pub const SEED_BUDGET_S: f64 = 30.0;
pub const CRITICAL_Y: f64 = 0.29177;
pub const BOWTIE_TOL: f64 = 1e-3;
pub const EDGE_OFFSET: f64 = 1e-3;
pub const LARGE_C: f64 = 1e4;
pub const JAC_FD_STEP: f64 = 1e-6;
pub const JAC_AGREE: f64 = 1e-5;
pub const JAC_DET_MIN: f64 = 1e-8;
pub const AXIS_TOL: f64 = 1e-4;
pub const REFLECTION_TOL: f64 = 1e-4;
pub const HORIZONTAL_TOL: f64 = 0.05;
pub const PHASE_TOL: f64 = 1e-8;
pub const VERIFY_NS: [i64; 4] = [8, 16, 32, 64];
pub const VERIFY_BUDGET_S: f64 = 300.0;
pub const CUBIC_TOL: f64 = 1e-10;
pub const JUMP_TOL: f64 = 1e-7;
pub const DIAGONAL_TOL: f64 = 1e-9;
pub const TOY_IDENTITY_TOL: f64 = 1e-10;
pub const TOY_ODE_TOL: f64 = 1e-7;
pub const AMPLITUDE_TOL: f64 = 1e-10;
pub const FIGURE_N: i64 = 10;
pub const FIGURE_GRID: usize = 241;
pub const FIGURE_RAYS: usize = 24;
pub const FIGURE_TOL: f64 = 0.05;

pub const CRITERIA: [(u32, &str); 14] = [
    (1, "ohyama exactness"),
    (2, "closed-form solutions"),
    (3, "painleve ode residual"),
    (4, "boutroux real seed"),
    (5, "critical value"),
    (6, "large-c asymptotic"),
    (7, "jacobian"),
    (8, "level set structure"),
    (9, "phase reality"),
    (10, "large-n limit"),
    (11, "curve-cubic identity"),
    (12, "weierstrass reduction"),
    (13, "toy rhp suite"),
    (14, "bow-tie pole cloud"),
];

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<24} {} ({:.1} s) {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.seconds,
            self.detail
        )
    }
}

/// The complex test point inside the right wing.
pub fn complex_y() -> C {
    C::from_polar(0.15, PI / 8.0)
}

pub fn run(id: u32) -> Result<CriterionResult> {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .ok_or_else(|| Error::InvalidIndex(format!("no criterion {id}")))?;
    let t0 = Instant::now();
    let out = match id {
        1 => ohyama_exactness(),
        2 => closed_forms(),
        3 => ode_residuals(),
        4 => real_seed(),
        5 => critical_value(),
        6 => large_c(),
        7 => jacobian(),
        8 => level_set(),
        9 => phase_reality(),
        10 => large_n(),
        11 => curve_cubic(),
        12 => weierstrass(),
        13 => toy_suite(),
        _ => figure(),
    };
    let seconds = t0.elapsed().as_secs_f64();
    let (passed, detail) = out.unwrap_or_else(|e| (false, format!("error: {e}")));
    Ok(CriterionResult { id, name, passed, detail, seconds })
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| run(c.0).expect("listed criterion")).collect()
}

type Outcome = Result<(bool, String)>;

pub fn listed_polynomials() -> [(i64, &'static str); 7] {
    [
        (-3, "1 + 4ζ^-2 + 5ζ^-4"),
        (-2, "ζ^-1 + ζ^-3"),
        (-1, "ζ^-1"),
        (0, "1"),
        (1, "ζ^2"),
        (2, "ζ^5 - ζ^3"),
        (3, "ζ^9 - 4ζ^7 + 5ζ^5"),
    ]
}

fn ohyama_exactness() -> Outcome {
    let t0 = Instant::now();
    let mut bad = Vec::new();
    for (n, want) in listed_polynomials() {
        let got = ohyama::compute(n)?.to_string();
        if got != want {
            bad.push(format!("R_{n} = {got}"));
        }
    }
    let mut rec_fail = Vec::new();
    for n in -RECURRENCE_RANGE..=RECURRENCE_RANGE {
        if !ohyama::verify_recurrence(n)? {
            rec_fail.push(n);
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    let ok = bad.is_empty() && rec_fail.is_empty() && secs <= OHYAMA_BUDGET_S;
    Ok((ok, format!("mismatches {bad:?}, recurrence failures {rec_fail:?}, {secs:.2} s")))
}

/// The closed forms of `u_n`, `n = -2..2`, in `t = x^{1/3}`.
pub fn closed_form_u(n: i64, x: C) -> Option<C> {
    let t = cbrt_principal(x);
    let t2 = t * t;
    let t3 = t2 * t;
    let t5 = t3 * t2;
    Some(match n {
        -2 => (9.0 * t5 + 12.0 * t3 + 5.0 * t) / (2.0 * (3.0 * t2 + 1.0) * (3.0 * t2 + 1.0)),
        -1 => (3.0 * t2 + 1.0) / (6.0 * t),
        0 => 0.5 * t,
        1 => (3.0 * t2 - 1.0) / (6.0 * t),
        2 => (9.0 * t5 - 12.0 * t3 + 5.0 * t) / (2.0 * (3.0 * t2 - 1.0) * (3.0 * t2 - 1.0)),
        _ => return None,
    })
}

fn closed_forms() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let xs: Vec<C> = (0..20).map(|_| C::from_polar(0.1 * 100f64.powf(rng.gen::<f64>()), rng.gen_range(-PI..PI))).collect();
    let mut worst = 0.0f64;
    for n in -2..=2 {
        let sol = AlgebraicSolution::new(n)?;
        for &x in &xs {
            let want = closed_form_u(n, x).expect("listed index");
            worst = worst.max((sol.eval_u(x)? - want).norm() / want.norm());
        }
    }
    Ok((worst <= CLOSED_FORM_TOL, format!("max relative error {worst:.2e}")))
}

/// Quasi-random points of `0.1 ≤ |x| ≤ 10`, `|arg x| < π`.
pub fn annulus_samples(m: usize) -> Vec<C> {
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let root2 = 2f64.sqrt() - 1.0;
    (1..=m)
        .map(|k| {
            let a = (k as f64 * golden).fract();
            let b = (k as f64 * root2).fract();
            C::from_polar(0.1 * 100f64.powf(a), PI * (2.0 * b - 1.0))
        })
        .collect()
}

fn ode_residuals() -> Outcome {
    let xs = annulus_samples(ODE_SAMPLES);
    let mut worst = 0.0f64;
    let mut skipped = 0;
    for n in 0..=ODE_MAX_N {
        let sol = AlgebraicSolution::new(n)?;
        for &x in &xs {
            match sol.ode_residual_relative(x) {
                Ok(r) => worst = worst.max(r),
                Err(Error::PoleHit) | Err(Error::ZeroHit) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    Ok((worst <= ODE_TOL, format!("max relative residual {worst:.2e}, {skipped} samples on poles")))
}

fn real_seed() -> Outcome {
    let t0 = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for y in SEED_YS {
        let b = solve_c1_real(y)?;
        let s = b.curve.s();
        let ordered = s[0].re < 0.0 && 0.0 < s[1].re && s[1].re < s[2].re && s.iter().all(|z| z.im.abs() < 1e-12);
        let c0 = seed_c0(C::new(y, 0.0))?.0.re;
        let good = ordered && b.c1.re > c0 && b.i12.abs() <= I12_TOL;
        ok &= good;
        notes.push(format!("y={y}: c1={:.10} c0={c0:.6} I12={:.1e} I23={:.1e}", b.c1.re, b.i12, b.i23));
    }
    let secs = t0.elapsed().as_secs_f64();
    Ok((ok && secs <= SEED_BUDGET_S, format!("{}; {secs:.2} s", notes.join("; "))))
}

fn critical_value() -> Outcome {
    let yc = bowtie_boundary(0.0, 1e-7)?.norm();
    let edge = bowtie_boundary(0.5 * PI - EDGE_OFFSET, 1e-7)?.norm();
    let corner = 2.0 / 27f64.sqrt();
    let ok = (yc - CRITICAL_Y).abs() <= BOWTIE_TOL && (edge - corner).abs() <= BOWTIE_TOL;
    Ok((ok, format!("y_c = {yc:.6}, |y| at arg π/2-1e-3 = {edge:.6} (2/√27 = {corner:.6})")))
}

fn large_c() -> Outcome {
    let ratio = i12_real(0.2, LARGE_C)? / LARGE_C.sqrt() / PI;
    Ok(((0.95..=1.05).contains(&ratio), format!("I12/(π√c) = {ratio:.6}")))
}

/// The solved points used by the Jacobian, phase and cubic checks.
pub fn solved_points() -> Vec<C> {
    vec![C::new(0.05, 0.0), C::new(0.15, 0.0), C::new(0.25, 0.0), complex_y(), C::new(0.25, 0.1)]
}

fn jacobian() -> Outcome {
    let mut worst = 0.0f64;
    let mut min_det = f64::INFINITY;
    for y in solved_points() {
        let b = solve_c1(y)?;
        let j = b.curve.jacobian()?;
        let fd = b.curve.jacobian_fd(JAC_FD_STEP)?;
        for (row, fd_row) in j.m.iter().zip(&fd) {
            for (a, b) in row.iter().zip(fd_row) {
                worst = worst.max((a - b).abs());
            }
        }
        min_det = min_det.min(j.det.abs());
    }
    Ok((worst <= JAC_AGREE && min_det > JAC_DET_MIN, format!("max entry gap {worst:.2e}, min |det| {min_det:.3e}")))
}

fn level_set() -> Outcome {
    let b = solve_c1_real(0.15)?;
    let g = trace_K(&b)?;
    let axis = g.axis_distance();
    let refl = g.reflection_defect();
    let horiz = g.max_nonhorizontal();
    let enclosed = g.origin_enclosed();
    let ok = g.case == CaseTag::CaseI && axis <= AXIS_TOL && enclosed && horiz <= HORIZONTAL_TOL && refl <= REFLECTION_TOL;
    Ok((
        ok,
        format!(
            "case {:?}, {} arcs, axis {axis:.1e}, reflection {refl:.1e}, horizontal {horiz:.3}, origin enclosed {enclosed}",
            g.case,
            g.arcs.len()
        ),
    ))
}

fn phase_reality() -> Outcome {
    let mut worst = 0.0f64;
    for y in [C::new(0.15, 0.0), complex_y(), C::new(0.25, 0.1)] {
        let p = solve_c1(y)?.phases;
        worst = worst.max(p.re_sum_23).max(p.re_sum_01);
    }
    Ok((worst <= PHASE_TOL, format!("max |Re(h+ + h-)| {worst:.2e}")))
}

fn large_n() -> Outcome {
    let w0 = Instant::now();
    let top = VERIFY_NS.iter().max().expect("nonempty") + 1;
    ohyama::compute(top)?;
    let warm = w0.elapsed().as_secs_f64();
    let t0 = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for y in [C::new(0.15, 0.0), complex_y()] {
        let b = solve_c1(y)?;
        let rep = verify(&b, &VERIFY_NS, &default_z_samples())?;
        ok &= rep.passed();
        let fmt = |v: Vec<f64>| v.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join(",");
        notes.push(format!(
            "y={:.4}{:+.4}i first [{}] slope {:.2} monotone {}, second [{}] slope {:.2} monotone {}",
            y.re,
            y.im,
            fmt(rep.levels.iter().map(|l| l.max_first_order).collect()),
            rep.first_order.slope,
            rep.first_order.monotone,
            fmt(rep.levels.iter().map(|l| l.max_second_order).collect()),
            rep.second_order.slope,
            rep.second_order.monotone
        ));
    }
    let secs = t0.elapsed().as_secs_f64();
    Ok((ok && secs <= VERIFY_BUDGET_S, format!("{}; {secs:.1} s plus {warm:.1} s building R_n", notes.join("; "))))
}

fn curve_cubic() -> Outcome {
    let mut worst = 0.0f64;
    for y in solved_points() {
        worst = worst.max(curve_cubic_correspondence(&solve_c1(y)?, 200, 11));
    }
    Ok((worst <= CUBIC_TOL, format!("max relative defect {worst:.2e}")))
}

fn weierstrass() -> Outcome {
    let w = weierstrass_identity_defect();
    let s = second_order_consistency_defect();
    Ok((w.is_zero() && s.is_zero(), format!("identity defect zero {}, second-order defect zero {}", w.is_zero(), s.is_zero())))
}

fn toy_suite() -> Outcome {
    let zs = [C::new(0.0, 0.0), C::new(3.0, -2.0), C::new(1.0, 1.0), C::new(0.0, 2.0), C::new(-1.5, 0.0)];
    let (mut jump, mut diag, mut ident, mut ode, mut amp) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for z in zs {
        for k in 0..20 {
            jump = jump.max(toy::toy_jump_residual(-0.95 + 1.9 * k as f64 / 19.0, z)?);
        }
        let n1 = toy::toy_laurent_coefficient(1, z)?;
        let half_iz = C::new(0.0, 0.5) * z;
        diag = diag.max((n1.a[0][0] + half_iz).norm()).max((n1.a[1][1] - half_iz).norm());
        let rep = toy::identity_check_with(&n1, z, TOY_IDENTITY_TOL)?;
        ident = ident.max(rep.product).max(rep.g_square).max(rep.g_form);
        ode = ode.max(toy::toy_ode_residual(z, 1e-4)?);
        amp = amp.max((toy::toy_nls_amplitude(z)?.norm() - 1.0).abs());
    }
    let ok = jump <= JUMP_TOL && diag <= DIAGONAL_TOL && ident <= TOY_IDENTITY_TOL && ode <= TOY_ODE_TOL && amp <= AMPLITUDE_TOL;
    Ok((
        ok,
        format!("jump {jump:.1e}, diagonals {diag:.1e}, identities {ident:.1e}, ode {ode:.1e}, |q|-1 {amp:.1e}"),
    ))
}

/// Zeros of `R_n(√3√n Y)` located from the peaks of the density grid on `[-h, h]²`.
pub fn grid_poles(n: i64, h: f64, res: usize) -> Result<Vec<C>> {
    let sol = AlgebraicSolution::new(n)?;
    let g = density_grid(n, Bounds::square(h), res, res)?;
    let spacing = 2.0 * h / (res - 1) as f64;
    let mut poles: Vec<C> = Vec::new();
    for (i, j) in g.peaks(0.0) {
        let p0 = g.point(i, j);
        let p = if p0.norm() < 0.5 * spacing && g.get(i, j).is_infinite() { C::new(0.0, 0.0) } else { refine_pole(&sol, p0, 1e-13)? };
        if (p - p0).norm() < 2.0 * spacing && !poles.iter().any(|q| (q - p).norm() < 1e-8) {
            poles.push(p);
        }
    }
    Ok(poles)
}

fn figure() -> Outcome {
    let bt = BowTie::compute(FIGURE_RAYS, 1e-6)?;
    let poles = grid_poles(FIGURE_N, 1.0, FIGURE_GRID)?;
    let r = ohyama::compute(FIGURE_N)?;
    let expected = match (r.min_exp(), r.max_exp()) {
        (Some(lo), Some(hi)) => (hi - lo) as usize + usize::from(lo > 0),
        _ => 0,
    };
    let worst = poles.iter().map(|&p| bt.distance(p)).fold(0.0, f64::max);
    let inside = poles.iter().filter(|&&p| bt.contains(p)).count();
    Ok((
        poles.len() == expected && worst <= FIGURE_TOL,
        format!("{} of {expected} poles found, {inside} inside, max distance to the region {worst:.4}", poles.len()),
    ))
}

