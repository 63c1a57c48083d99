//! The spectral curve `h_η² = P(-iη)/(-iη)³`, `P(μ) = -μ³ + μ² + cμ - y²/4`,
//! and the Boutroux conditions that fix `c = c₁(y)`.
//!
//! All contour work is done in `μ = -iη`, where `h_η dη = Q(μ) dμ` with
//! `Q(μ)² = (μ-s₁)(μ-s₂)(μ-s₃)/μ³`, `Q → 1` at infinity and cuts on the
//! straight segments `[s₁, 0]` and `[s₂, s₃]`.

use std::f64::consts::PI;

use roots::{find_root_brent, SimpleConvergency};

use crate::error::{Error, Result};
use crate::quad::{path_integral, ray_integral, Bezier, Path, Segment, Spiral};
use crate::C;

pub const QUAD_TOL: f64 = 1e-13;
pub const JAC_TOL: f64 = 1e-10;
pub const NEWTON_TOL: f64 = 1e-11;
pub const NEWTON_MAX_ITER: usize = 50;
pub const MAX_HALVINGS: usize = 8;
pub const COLLISION_TOL: f64 = 1e-8;
pub const STEP_INIT: f64 = 1e-2;
pub const STEP_FLOOR: f64 = 1e-6;
pub const REALITY_TOL: f64 = 1e-9;

fn i() -> C {
    C::new(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveParams {
    pub y: C,
    pub c: C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Labeling {
    RealSeed,
    Continued,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRoots {
    pub s: [C; 3],
    pub labeling: Labeling,
}

/// Path geometry: spiral `s₁ → s₂` with argument change `sweep` and Bézier
/// `s₂ → s₃` bowed to the left by `height·|s₃-s₂|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSpec {
    pub sweep: f64,
    pub bulge12: f64,
    pub height23: f64,
}

impl Default for PathSpec {
    fn default() -> Self {
        PathSpec { sweep: -PI, bulge12: 0.0, height23: 0.5 }
    }
}

/// A labelled curve together with the integration paths attached to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curve {
    pub params: CurveParams,
    pub roots: CurveRoots,
    pub paths: PathSpec,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobian {
    /// `∂(I₁₂, I₂₃)/∂(c_R, c_I)`.
    pub m: [[f64; 2]; 2],
    pub det: f64,
    /// `∫ dμ/(μ² Q)` along the two paths (equal to `∫ dη/(η² h_η)`).
    pub a_int: C,
    pub b_int: C,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phases {
    pub psi: f64,
    pub xi: f64,
    pub kappa: f64,
    /// `max |Re(h₊+h₋)|` over the sample points of `Σ₂₃`.
    pub re_sum_23: f64,
    /// `max |Re(h₊+h₋)|` over the sample points of `Σ₀₁`.
    pub re_sum_01: f64,
    /// `|Re(h₊-h₋)|` across `Σ₀₂`.
    pub re_diff_02: f64,
    /// Spread of `Im(h₊+h₋)` along each cut.
    pub psi_spread: f64,
    pub xi_spread: f64,
    /// `Im(h₊-h₋)` on `Σ₀₁` at the three sample points (not constant).
    pub diff_01: [f64; 3],
    /// `-Im K` where `h = ∫_{s₃}^μ Q + iτ` is normalized to `μ - ½ Log μ + real + o(1)`.
    pub tau: f64,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoutrouxSolution {
    pub y: C,
    pub c1: C,
    pub i12: f64,
    pub i23: f64,
    pub iterations: usize,
    pub curve: Curve,
    pub E: C,
    pub phases: Phases,
}

pub fn p_value(mu: C, y: C, c: C) -> C {
    -mu * mu * mu + mu * mu + c * mu - y * y / 4.0
}

/// Roots of `μ³ - μ² - cμ + y²/4` by Cardano, each polished by Newton.
fn cubic_roots(y: C, c: C) -> [C; 3] {
    // μ = t + 1/3: t³ + pt + q
    let p = -c - C::new(1.0 / 3.0, 0.0);
    let q = -c / 3.0 - C::new(2.0 / 27.0, 0.0) + y * y / 4.0;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut a = cube_root(-q / 2.0 + disc);
    if a.norm() < 1e-150 {
        a = cube_root(-q / 2.0 - disc);
    }
    let w = C::from_polar(1.0, 2.0 * PI / 3.0);
    let mut out = [C::new(0.0, 0.0); 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let ak = a * w.powi(k as i32);
        let t = if ak.norm() > 0.0 { ak - p / (3.0 * ak) } else { ak };
        let mut mu = t + 1.0 / 3.0;
        for _ in 0..4 {
            let f = mu * mu * mu - mu * mu - c * mu + y * y / 4.0;
            let d = 3.0 * mu * mu - 2.0 * mu - c;
            if d.norm() == 0.0 {
                break;
            }
            let step = f / d;
            mu -= step;
            if step.norm() <= 1e-17 * mu.norm() {
                break;
            }
        }
        *slot = mu;
    }
    out
}

fn cube_root(z: C) -> C {
    if z.norm() == 0.0 {
        z
    } else {
        (z.ln() / 3.0).exp()
    }
}

fn min_gap(s: &[C; 3]) -> f64 {
    (s[0] - s[1]).norm().min((s[1] - s[2]).norm()).min((s[0] - s[2]).norm())
}

fn check_collision(s: &[C; 3]) -> Result<()> {
    let scale = s.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let gap = min_gap(s);
    if gap < COLLISION_TOL * scale {
        return Err(Error::RootCollision(gap));
    }
    Ok(())
}

/// Roots of `P` labelled by increasing real part.
#[allow(non_snake_case)]
pub fn roots_of_P(p: CurveParams) -> Result<CurveRoots> {
    if p.y == C::new(0.0, 0.0) {
        return Err(Error::InvalidIndex("y must be nonzero".into()));
    }
    let mut s = cubic_roots(p.y, p.c);
    s.sort_by(|a, b| a.re.total_cmp(&b.re));
    check_collision(&s)?;
    Ok(CurveRoots { s, labeling: Labeling::RealSeed })
}

/// Relabels `new` to follow `prev` (minimal total displacement over all permutations).
pub fn track_roots(prev: &[C; 3], new: [C; 3]) -> [C; 3] {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let cost = |p: &[usize; 3]| (0..3).map(|k| (new[p[k]] - prev[k]).norm()).sum::<f64>();
    let best = PERMS.iter().min_by(|a, b| cost(a).total_cmp(&cost(b))).unwrap();
    [new[best[0]], new[best[1]], new[best[2]]]
}

fn unwrap_sweep(prev: f64, a: C, b: C) -> f64 {
    let d = b.arg() - a.arg();
    let k = ((prev - d) / (2.0 * PI)).round();
    d + 2.0 * PI * k
}

/// `Q(μ)` on the sheet with `Q → 1` at infinity, cut along `[s₁,0]` and `[s₂,s₃]`.
pub fn q_value(mu: C, s: &[C; 3]) -> C {
    ((mu - s[0]) / mu).sqrt() * ((mu - s[1]) / (mu - s[2])).sqrt() * (mu - s[2]) / mu
}

/// `Q(μ) - 1 + 1/(2μ)` without cancellation at large `|μ|`.
pub fn q_tail(mu: C, curve: &CurveParams, s: &[C; 3]) -> C {
    let q = q_value(mu, s);
    let scale = s.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if mu.norm() < 4.0 * scale {
        return q - 1.0 + 0.5 / mu;
    }
    let w = 1.0 / mu;
    let num = -(curve.c + 0.25) * w * w + 0.25 * curve.y * curve.y * w * w * w;
    num / (q + 1.0 - 0.5 * w)
}

fn dist_to_segment(p: C, a: C, b: C) -> f64 {
    let ab = b - a;
    let t = ((p - a) * ab.conj()).re / ab.norm_sqr();
    (p - (a + ab * t.clamp(0.0, 1.0))).norm()
}

/// `h_η` normalized as `-i - ½η⁻¹ + O(η⁻²)` at infinity.
pub fn h_eta(eta: C, roots: &CurveRoots) -> Result<C> {
    if eta == C::new(0.0, 0.0) {
        return Err(Error::AtOrigin);
    }
    let mu = -i() * eta;
    let s = &roots.s;
    let scale = s.iter().map(|z| z.norm()).fold(mu.norm(), f64::max);
    let eps = 1e-14 * scale;
    let on01 = dist_to_segment(mu, s[0], C::new(0.0, 0.0)) < eps && (mu - s[0]).norm() > eps;
    let on23 = dist_to_segment(mu, s[1], s[2]) < eps && (mu - s[1]).norm() > eps && (mu - s[2]).norm() > eps;
    if on01 || on23 {
        return Err(Error::OnCut);
    }
    Ok(-i() * q_value(mu, s))
}

/// `Φ(η, y) = iη - y(-iη)^{-1/2}` with the principal square root.
pub fn phi(eta: C, y: C) -> Result<C> {
    if eta == C::new(0.0, 0.0) {
        return Err(Error::AtOrigin);
    }
    Ok(i() * eta - y / (-i() * eta).sqrt())
}

impl Curve {
    /// Real-ordered curve with default paths.
    pub fn new(y: C, c: C) -> Result<Curve> {
        let params = CurveParams { y, c };
        Ok(Curve { params, roots: roots_of_P(params)?, paths: PathSpec::default() })
    }

    /// Same labels and sheet bookkeeping, moved to new parameters.
    pub fn moved_to(&self, y: C, c: C) -> Result<Curve> {
        let s = track_roots(&self.roots.s, cubic_roots(y, c));
        check_collision(&s)?;
        let sweep = unwrap_sweep(self.paths.sweep, s[0], s[1]);
        Ok(Curve {
            params: CurveParams { y, c },
            roots: CurveRoots { s, labeling: Labeling::Continued },
            paths: PathSpec { sweep, ..self.paths },
        })
    }

    pub fn s(&self) -> &[C; 3] {
        &self.roots.s
    }

    pub fn path12(&self) -> Spiral {
        let s = self.s();
        Spiral { a: s[0], b: s[1], sweep: self.paths.sweep, bulge: self.paths.bulge12 }
    }

    /// The same spiral on the other side of the cut `[s₁, 0]`.
    pub fn path12_other(&self) -> Spiral {
        let mut p = self.path12();
        p.sweep += if self.paths.sweep < 0.0 { 2.0 * PI } else { -2.0 * PI };
        p
    }

    pub fn path23(&self) -> Bezier {
        let s = self.s();
        Bezier { a: s[1], b: s[2], height: self.paths.height23 }
    }

    pub fn path23_other(&self) -> Bezier {
        let mut p = self.path23();
        p.height = -p.height;
        p
    }

    pub fn integrate_q<P: Path>(&self, path: &P) -> Result<C> {
        let s = *self.s();
        path_integral(path, |mu| q_value(mu, &s), QUAD_TOL)
    }

    /// `(∫_{s₁}^{s₂} Q dμ, ∫_{s₂}^{s₃} Q dμ)` along the two paths.
    pub fn period_integrals(&self) -> Result<(C, C)> {
        Ok((self.integrate_q(&self.path12())?, self.integrate_q(&self.path23())?))
    }

    /// `(I₁₂, I₂₃)`.
    pub fn boutroux_residuals(&self) -> Result<(f64, f64)> {
        let (a, b) = self.period_integrals()?;
        Ok((a.re, b.re))
    }

    fn inv_mu2q<P: Path>(&self, path: &P) -> Result<C> {
        let s = *self.s();
        path_integral(path, |mu| 1.0 / (mu * mu * q_value(mu, &s)), JAC_TOL)
    }

    /// `∂Q/∂c = -1/(2μ²Q)`, so `∂I/∂c = -½∫dμ/(μ²Q)`; as `I` is the real part of
    /// a function holomorphic in `c`, `∂/∂c_R = Re` and `∂/∂c_I = -Im`.
    pub fn jacobian(&self) -> Result<Jacobian> {
        let a_int = self.inv_mu2q(&self.path12())?;
        let b_int = self.inv_mu2q(&self.path23())?;
        let a = -0.5 * a_int;
        let b = -0.5 * b_int;
        let m = [[a.re, -a.im], [b.re, -b.im]];
        let det = -0.25 * (a_int.conj() * b_int).im;
        Ok(Jacobian { m, det, a_int, b_int })
    }

    /// Central-difference Jacobian of the residuals.
    pub fn jacobian_fd(&self, h: f64) -> Result<[[f64; 2]; 2]> {
        let y = self.params.y;
        let c = self.params.c;
        let at = |dc: C| -> Result<(f64, f64)> { self.moved_to(y, c + dc)?.boutroux_residuals() };
        let (fr, gr) = at(C::new(h, 0.0))?;
        let (fl, gl) = at(C::new(-h, 0.0))?;
        let (fu, gu) = at(C::new(0.0, h))?;
        let (fd, gd) = at(C::new(0.0, -h))?;
        let d = 2.0 * h;
        Ok([[(fr - fl) / d, (fu - fd) / d], [(gr - gl) / d, (gu - gd) / d]])
    }

    /// Damped Newton on `(I₁₂, I₂₃) = 0` in `(c_R, c_I)` at fixed `y`.
    pub fn newton(&self) -> Result<(Curve, usize, (f64, f64))> {
        let mut cur = *self;
        let mut f = cur.boutroux_residuals()?;
        for it in 0..NEWTON_MAX_ITER {
            let norm = f.0.abs().max(f.1.abs());
            if norm <= NEWTON_TOL {
                return Ok((cur, it, f));
            }
            let j = cur.jacobian()?;
            let det = j.m[0][0] * j.m[1][1] - j.m[0][1] * j.m[1][0];
            if det == 0.0 || !det.is_finite() {
                return Err(Error::NewtonFailure(norm));
            }
            let dr = -(j.m[1][1] * f.0 - j.m[0][1] * f.1) / det;
            let di = -(-j.m[1][0] * f.0 + j.m[0][0] * f.1) / det;
            let mut lambda = 1.0;
            let mut accepted = None;
            for _ in 0..=MAX_HALVINGS {
                let c = cur.params.c + C::new(dr, di) * lambda;
                if let Ok(next) = cur.moved_to(cur.params.y, c) {
                    if let Ok(fn_) = next.boutroux_residuals() {
                        if fn_.0.abs().max(fn_.1.abs()) < norm {
                            accepted = Some((next, fn_));
                            break;
                        }
                    }
                }
                lambda *= 0.5;
            }
            match accepted {
                Some((next, fn_)) => {
                    cur = next;
                    f = fn_;
                }
                None => return Err(Error::NewtonFailure(norm)),
            }
            if it + 1 == NEWTON_MAX_ITER {
                break;
            }
        }
        let norm = f.0.abs().max(f.1.abs());
        if norm <= NEWTON_TOL {
            Ok((cur, NEWTON_MAX_ITER, f))
        } else {
            Err(Error::NewtonFailure(norm))
        }
    }

    /// `K` in `∫_{s₃}^μ Q = μ - ½ Log μ + K + o(1)`, the limit taken along the
    /// ray leaving `s₃` away from `s₂`.
    pub fn k_constant(&self) -> Result<C> {
        let s = *self.s();
        let d = (s[2] - s[1]) / (s[2] - s[1]).norm();
        let len = s.iter().map(|z| z.norm()).fold(1e-3, f64::max);
        let pr = self.params;
        let tail = ray_integral(s[2], d, len, |nu| q_tail(nu, &pr, &s), QUAD_TOL)?;
        let k_raw = -s[2] + 0.5 * s[2].ln() + tail;
        let cross = s[2].re * d.im - s[2].im * d.re;
        let dot = s[2].re * d.re + s[2].im * d.im;
        let arg_cont = s[2].arg() + cross.atan2(dot);
        Ok(k_raw - 0.5 * i() * (arg_cont - d.arg()))
    }

    /// `Re h(μ)` with `Re h(s₃) = 0`; the tail to infinity is taken along
    /// the first ray from `μ` that clears both cuts and the origin.
    pub fn re_h(&self, mu: C, k: C) -> Result<f64> {
        if mu == C::new(0.0, 0.0) {
            return Err(Error::AtOrigin);
        }
        let s = *self.s();
        let scale = s.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let base = if mu.norm() > 0.0 { mu / mu.norm() } else { C::new(1.0, 0.0) };
        let far = 1e3 * scale.max(mu.norm());
        let margin = 1e-3 * scale;
        let mut chosen = None;
        for k in 0..24 {
            let rot = (k as f64 / 2.0).ceil() * if k % 2 == 0 { 1.0 } else { -1.0 } * PI / 12.0;
            let d = base * C::from_polar(1.0, rot);
            let end = mu + d * far;
            let clear = segments_clear(mu + d * (2.0 * margin), end, &[(s[0], C::new(0.0, 0.0)), (s[1], s[2])], margin)
                && dist_to_segment(C::new(0.0, 0.0), mu, end) > margin.min(0.5 * mu.norm());
            if clear {
                chosen = Some(d);
                break;
            }
        }
        let d = chosen.ok_or_else(|| Error::PathConstructionFailure(format!("no clear ray from {mu}")))?;
        let len = mu.norm().max(scale).max(1e-3);
        let pr = self.params;
        let tail = ray_integral(mu, d, len, |nu| q_tail(nu, &pr, &s), 1e-11)?;
        Ok(mu.re - 0.5 * mu.norm().ln() + k.re - tail.re)
    }

    fn h_plus_minus_on_segment(&self, start_val: (C, C), a: C, b: C, t: f64) -> Result<(C, C)> {
        let s = *self.s();
        let dir = (b - a) / (b - a).norm();
        let eps = 1e-14 * s.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let n = i() * dir * eps;
        let m = a + (b - a) * t;
        let seg = Segment { a, b: m };
        let plus = path_integral(&seg, |nu| q_value(nu + n, &s), QUAD_TOL)?;
        let minus = path_integral(&seg, |nu| q_value(nu - n, &s), QUAD_TOL)?;
        Ok((start_val.0 + plus, start_val.1 + minus))
    }

    /// Boundary-value phases of `h`; see [`Phases`].
    pub fn phases(&self) -> Result<Phases> {
        let s = *self.s();
        let k = self.k_constant()?;
        let tau = -k.im;
        let it = i() * tau;
        let b_left = self.integrate_q(&self.path23())?;
        let b_right = self.integrate_q(&self.path23_other())?;
        let a_left = self.integrate_q(&self.path12())?;
        let a_right = self.integrate_q(&self.path12_other())?;
        let ts = [0.25, 0.5, 0.75];

        // Σ₂₃ oriented s₂ → s₃; start at s₃ and walk back.
        let mut sums23 = Vec::new();
        for &t in &ts {
            let (p, m) = self.h_plus_minus_on_segment((it, it), s[2], s[1], 1.0 - t)?;
            // walking s₃ → s₂ swaps left and right
            sums23.push(m + p);
        }
        // Σ₀₁: values at s₁ reached on the left and right of the chain s₃ → s₂ → s₁.
        let h_s1_left = it - b_left - a_left;
        let h_s1_right = it - b_right - a_right;
        let mut sums01 = Vec::new();
        let mut diffs01 = [0.0; 3];
        for (j, &t) in ts.iter().enumerate() {
            let (p, m) = self.h_plus_minus_on_segment((h_s1_left, h_s1_right), s[0], C::new(0.0, 0.0), t)?;
            sums01.push(p + m);
            diffs01[j] = (p - m).im;
        }
        // Σ₀₂ oriented toward 0: its left side meets the right side of s₂ → s₃.
        let diff02 = (it - b_right) - (it - b_left);

        let spread = |v: &[C]| {
            let lo = v.iter().map(|z| z.im).fold(f64::INFINITY, f64::min);
            let hi = v.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        };
        let max_re = |v: &[C]| v.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
        let worst = max_re(&sums23).max(max_re(&sums01)).max(diff02.re.abs());
        if worst > REALITY_TOL {
            return Err(Error::RealityViolation(format!("|Re| = {worst:e} on the cuts")));
        }
        Ok(Phases {
            psi: sums23[1].im,
            xi: sums01[1].im,
            kappa: diff02.im,
            re_sum_23: max_re(&sums23),
            re_sum_01: max_re(&sums01),
            re_diff_02: diff02.re.abs(),
            psi_spread: spread(&sums23),
            xi_spread: spread(&sums01),
            diff_01: diffs01,
            tau,
        })
    }

    /// Clockwise loop integrals of `Q` around `[s₁,0]` and `[s₂,s₃]`.
    pub fn loop_integrals(&self) -> Result<(C, C)> {
        let a_left = self.integrate_q(&self.path12())?;
        let a_right = self.integrate_q(&self.path12_other())?;
        let b_left = self.integrate_q(&self.path23())?;
        let b_right = self.integrate_q(&self.path23_other())?;
        let sign = if self.paths.sweep < 0.0 { 1.0 } else { -1.0 };
        Ok((sign * (a_left - a_right), b_left - b_right))
    }
}

fn segments_clear(a: C, b: C, cuts: &[(C, C)], margin: f64) -> bool {
    cuts.iter().all(|&(p, q)| seg_seg_distance(a, b, p, q) > margin)
}

fn seg_seg_distance(a: C, b: C, p: C, q: C) -> f64 {
    let cross = |u: C, v: C| u.re * v.im - u.im * v.re;
    let d1 = cross(b - a, p - a);
    let d2 = cross(b - a, q - a);
    let d3 = cross(q - p, a - p);
    let d4 = cross(q - p, b - p);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return 0.0;
    }
    dist_to_segment(p, a, b)
        .min(dist_to_segment(q, a, b))
        .min(dist_to_segment(a, p, q))
        .min(dist_to_segment(b, p, q))
}

/// Report of [`r_expansion_check`]: deviation of `R = -h_η` from its four-term
/// series, and the size of the first omitted term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionReport {
    pub inf_point: C,
    pub inf_deviation: f64,
    pub inf_next_term: f64,
    pub zero_point: C,
    pub zero_deviation: f64,
    pub zero_next_term: f64,
}

/// Compares `R(η)` with its series at `|η| = 10³` and `|η| = 10⁻³`.
#[allow(non_snake_case)]
pub fn R_expansion_check(curve: &Curve) -> Result<ExpansionReport> {
    let s = curve.s();
    let (y, c) = (curve.params.y, curve.params.c);
    let r_of_mu = |mu: C| i() * q_value(mu, s);
    let mu_inf = C::from_polar(1e3, 0.3);
    let w = 1.0 / mu_inf;
    let series_inf = i() * (1.0 - 0.5 * w - 0.5 * (c + 0.25) * w * w + (2.0 * y * y - 4.0 * c - 1.0) / 16.0 * w * w * w);
    let dir = -s[0] / s[0].norm();
    let mu0 = dir * 1e-3;
    let y2 = y * y;
    let poly = 1.0 - 2.0 * c / y2 * mu0 - 2.0 * (c * c + y2) / (y2 * y2) * mu0 * mu0
        + 2.0 * (y2 * y2 - 2.0 * c * c * c - 2.0 * c * y2) / (y2 * y2 * y2) * mu0 * mu0 * mu0;
    let lead = -0.5 * i() * y * mu0.powf(-1.5);
    let series0 = lead * poly;
    let next0 = (lead * (4.0 * c / y2 * mu0).powi(4)).norm().max((lead * mu0.powi(4)).norm());
    Ok(ExpansionReport {
        inf_point: i() * mu_inf,
        inf_deviation: (r_of_mu(mu_inf) - series_inf).norm(),
        inf_next_term: w.norm().powi(4) * (1.0 + c.norm() + y2.norm()).powi(2),
        zero_point: i() * mu0,
        zero_deviation: (r_of_mu(mu0) - series0).norm(),
        zero_next_term: next0,
    })
}

/// Double-root data `(c₀, s, d)` with `s(s-1)² = -y²`, `d = (1-s)/2`,
/// `c₀ = (3s² - 2s - 1)/4`. The root `s` is the one that is real and
/// negative for `y > 0`, continued along the arc `|y| e^{iθ}`.
pub fn seed_c0(y: C) -> Result<(C, C, C)> {
    if y == C::new(0.0, 0.0) {
        return Err(Error::InvalidIndex("y must be nonzero".into()));
    }
    let r = y.norm();
    let s = seed_s_real(r);
    let theta = y.arg();
    let steps = ((theta.abs() / 0.01).ceil() as usize).max(1);
    let mut s = C::new(s, 0.0);
    for k in 1..=steps {
        let yk = C::from_polar(r, theta * k as f64 / steps as f64);
        s = track_s(yk, s);
    }
    Ok(seed_from_s(s))
}

fn seed_from_s(s: C) -> (C, C, C) {
    let d = (1.0 - s) / 2.0;
    let c0 = (3.0 * s * s - 2.0 * s - 1.0) / 4.0;
    (c0, s, d)
}

/// The negative real root of `s³ - 2s² + s + y² = 0` for real `y ≠ 0`.
fn seed_s_real(y: f64) -> f64 {
    let f = |s: f64| s * (s - 1.0) * (s - 1.0) + y * y;
    let mut lo = -1.0;
    while f(lo) > 0.0 {
        lo *= 2.0;
    }
    let mut conv = SimpleConvergency { eps: 1e-16, max_iter: 200 };
    find_root_brent(lo, 0.0, f, &mut conv).unwrap_or(lo)
}

fn s_roots(y: C) -> [C; 3] {
    // s³ - 2s² + s + y²: shift s = t + 2/3
    let p = C::new(-1.0 / 3.0, 0.0);
    let q = C::new(2.0 / 27.0, 0.0) + y * y;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut a = cube_root(-q / 2.0 + disc);
    if a.norm() < 1e-150 {
        a = cube_root(-q / 2.0 - disc);
    }
    let w = C::from_polar(1.0, 2.0 * PI / 3.0);
    let mut out = [C::new(0.0, 0.0); 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let ak = a * w.powi(k as i32);
        let mut s = if ak.norm() > 0.0 { ak - p / (3.0 * ak) } else { ak } + 2.0 / 3.0;
        for _ in 0..4 {
            let f = s * (s - 1.0) * (s - 1.0) + y * y;
            let d = 3.0 * s * s - 4.0 * s + 1.0;
            if d.norm() == 0.0 {
                break;
            }
            s -= f / d;
        }
        *slot = s;
    }
    out
}

fn track_s(y: C, prev: C) -> C {
    let r = s_roots(y);
    *r.iter().min_by(|a, b| (*a - prev).norm().total_cmp(&(*b - prev).norm())).unwrap()
}

/// `64c³ + 16c² + 72y²c + 16y² - 27y⁴`, zero exactly when `P` has a double root.
pub fn discriminant_poly(c: C, y: C) -> C {
    let y2 = y * y;
    64.0 * c * c * c + 16.0 * c * c + 72.0 * y2 * c + 16.0 * y2 - 27.0 * y2 * y2
}

/// Boutroux residual of the degenerate curve `c = c₀(y)`:
/// `G = Re ∫_s^d √((μ-s)/μ)·(μ-d)/μ dμ`. The boundary of the solvable
/// domain is where `G` changes sign from negative to positive.
fn degenerate_g(s: C, sweep: f64) -> Result<f64> {
    let d = (1.0 - s) / 2.0;
    let path = Spiral::new(s, d, sweep);
    let v = path_integral(&path, |mu| ((mu - s) / mu).sqrt() * (mu - d) / mu, QUAD_TOL)?;
    Ok(v.re)
}

/// Degenerate-curve state followed along a path in `y`.
#[derive(Debug, Clone, Copy)]
struct DegenerateTrack {
    s: C,
    sweep: f64,
}

impl DegenerateTrack {
    fn real(y: f64) -> Self {
        DegenerateTrack { s: C::new(seed_s_real(y), 0.0), sweep: -PI }
    }

    fn moved_to(&self, y: C) -> Self {
        let s = track_s(y, self.s);
        DegenerateTrack { s, sweep: unwrap_sweep(self.sweep, s, (1.0 - s) / 2.0) }
    }

    fn g(&self) -> Result<f64> {
        degenerate_g(self.s, self.sweep)
    }
}

fn finish(curve: Curve, iterations: usize, f: (f64, f64)) -> Result<BoutrouxSolution> {
    let phases = curve.phases()?;
    let y = curve.params.y;
    let c1 = curve.params.c;
    Ok(BoutrouxSolution { y, c1, i12: f.0, i23: f.1, iterations, curve, E: -8.0 * c1 / (y * y), phases })
}

/// `I₁₂` on the real axis as a function of real `c > c₀(y)`.
pub fn i12_real(y: f64, c: f64) -> Result<f64> {
    Ok(Curve::new(C::new(y, 0.0), C::new(c, 0.0))?.boutroux_residuals()?.0)
}

/// Unique real `c₁(y) > c₀(y)` with `I₁₂ = 0`, for `0 < y < y_c`.
pub fn solve_c1_real(y: f64) -> Result<BoutrouxSolution> {
    if y <= 0.0 {
        return Err(Error::BracketFailure(format!("y = {y} must be positive")));
    }
    let (c0, _, _) = seed_from_s(C::new(seed_s_real(y), 0.0));
    let c0 = c0.re;
    let lo = c0 + 1e-9 * c0.abs().max(1e-3);
    let f_lo = i12_real(y, lo)?;
    if f_lo >= 0.0 {
        return Err(Error::BracketFailure(format!("I12(c0+) = {f_lo:e} ≥ 0 at y = {y}")));
    }
    let mut width = 1.0;
    let mut hi = c0 + width;
    let mut guard = 0;
    while i12_real(y, hi)? <= 0.0 {
        width *= 2.0;
        hi = c0 + width;
        guard += 1;
        if guard > 40 {
            return Err(Error::BracketFailure("no sign change found".into()));
        }
    }
    let mut err = None;
    let mut conv = SimpleConvergency { eps: 1e-15, max_iter: 200 };
    let c = find_root_brent(
        lo,
        hi,
        |c| match i12_real(y, c) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                f64::NAN
            }
        },
        &mut conv,
    )
    .map_err(|e| Error::BracketFailure(format!("{e:?}")))?;
    if let Some(e) = err {
        return Err(e);
    }
    let curve = Curve::new(C::new(y, 0.0), C::new(c, 0.0))?;
    let (curve, iters, f) = curve.newton()?;
    finish(curve, iters, f)
}

fn path_point(y_seed: f64, target: C, sigma: f64) -> C {
    let theta = target.arg();
    let arc = y_seed * theta.abs();
    if sigma <= arc {
        let t = if arc > 0.0 { sigma / arc } else { 1.0 };
        C::from_polar(y_seed, theta * t)
    } else {
        let r = y_seed + (target.norm() - y_seed).signum() * (sigma - arc);
        C::from_polar(r, theta)
    }
}

/// Predictor–corrector continuation of `c₁` from the real seed `(y_seed, c_seed)`
/// along the arc `|y| = y_seed` to `arg y_target`, then radially to `y_target`.
pub fn continue_c1(y_target: C, y_seed: f64, c_seed: C) -> Result<BoutrouxSolution> {
    if y_target.re <= 0.0 {
        return Err(Error::InvalidIndex("continuation is done in the right half-plane".into()));
    }
    let seed = Curve::new(C::new(y_seed, 0.0), c_seed)?;
    let (mut cur, mut iters, mut f) = seed.newton()?;
    let mut deg = DegenerateTrack::real(y_seed);
    let total = y_seed * y_target.arg().abs() + (y_target.norm() - y_seed).abs();
    let mut sigma = 0.0;
    let mut h = STEP_INIT;
    let mut prev: Option<(f64, C)> = None;
    while sigma < total - 1e-15 {
        let step = h.min(total - sigma);
        let y_next = path_point(y_seed, y_target, sigma + step);
        let deg_next = deg.moved_to(y_next);
        let c_pred = match prev {
            Some((hp, cp)) => cur.params.c + (cur.params.c - cp) * (step / hp),
            None => cur.params.c,
        };
        let attempt = cur.moved_to(y_next, c_pred).and_then(|c| c.newton());
        match attempt {
            Ok((next, it, fn_)) => {
                if deg_next.g()? > 0.0 {
                    return Err(Error::BoundaryHit { re: y_next.re, im: y_next.im });
                }
                prev = Some((step, cur.params.c));
                cur = next;
                iters = it;
                f = fn_;
                deg = deg_next;
                sigma += step;
                h = (h * 1.5).min(STEP_INIT);
            }
            Err(e) => {
                h *= 0.5;
                if h < STEP_FLOOR {
                    let outside = deg_next.g().map(|g| g > -1e-10).unwrap_or(true);
                    return Err(if outside || matches!(e, Error::RootCollision(_)) {
                        Error::BoundaryHit { re: y_next.re, im: y_next.im }
                    } else {
                        Error::ContinuationStall(format!("at y = {y_next}: {e}"))
                    });
                }
            }
        }
    }
    finish(cur, iters, f)
}

/// `c₁(y)` anywhere in the domain: real seed on the positive axis, continuation
/// otherwise, and `c₁(-y) = c₁(y)` for the left half-plane.
pub fn solve_c1(y: C) -> Result<BoutrouxSolution> {
    if y == C::new(0.0, 0.0) {
        return Err(Error::InvalidIndex("y must be nonzero".into()));
    }
    let yr = if y.re < 0.0 { -y } else { y };
    if yr.im == 0.0 {
        return solve_c1_real(yr.re);
    }
    let y_seed = yr.norm().min(0.15);
    let seed = solve_c1_real(y_seed)?;
    continue_c1(yr, y_seed, seed.c1)
}

/// `|y|` of the boundary of the solvable domain on the ray `arg y = arg_y`,
/// located by the sign change of the degenerate-curve residual.
pub fn bowtie_boundary(arg_y: f64, tol: f64) -> Result<C> {
    if arg_y.abs() >= PI / 2.0 {
        return Err(Error::InvalidIndex("ray must lie in the right half-plane".into()));
    }
    let r0 = 0.1;
    let mut tr = DegenerateTrack::real(r0);
    let steps = ((arg_y.abs() / 0.01).ceil() as usize).max(1);
    for k in 1..=steps {
        tr = tr.moved_to(C::from_polar(r0, arg_y * k as f64 / steps as f64));
    }
    if tr.g()? >= 0.0 {
        return Err(Error::BracketFailure(format!("start of ray arg = {arg_y} is outside")));
    }
    let mut r = r0;
    let dr = 0.0025;
    loop {
        let r2 = r + dr;
        let t2 = tr.moved_to(C::from_polar(r2, arg_y));
        if t2.g()? > 0.0 {
            let (mut lo, mut hi) = (r, r2);
            let base = tr;
            while hi - lo > tol {
                let m = 0.5 * (lo + hi);
                if base.moved_to(C::from_polar(m, arg_y)).g()? > 0.0 {
                    hi = m;
                } else {
                    lo = m;
                }
            }
            return Ok(C::from_polar(0.5 * (lo + hi), arg_y));
        }
        r = r2;
        tr = t2;
        if r > 2.0 {
            return Err(Error::BracketFailure(format!("no boundary found on ray arg = {arg_y}")));
        }
    }
}

/// Boundary of the solvable domain sampled on rays `arg y ∈ [0, π/2)`, and the
/// image wings in the `Y = y^{1/3}` plane.
#[derive(Debug, Clone, PartialEq)]
pub struct BowTie {
    /// `(arg y, |y| at the boundary)` for `arg y ≥ 0`, increasing in the angle.
    pub rays: Vec<(f64, f64)>,
}

impl BowTie {
    /// `rays` equally spaced angles in `[0, π/2)` plus one at `π/2 - 10⁻³`.
    pub fn compute(rays: usize, tol: f64) -> Result<BowTie> {
        let mut out = Vec::with_capacity(rays + 1);
        for k in 0..rays.max(1) {
            let a = 0.5 * PI * k as f64 / rays.max(1) as f64;
            out.push((a, bowtie_boundary(a, tol)?.norm()));
        }
        let edge = 0.5 * PI - 1e-3;
        out.push((edge, bowtie_boundary(edge, tol)?.norm()));
        Ok(BowTie { rays: out })
    }

    /// Boundary in the `y`-plane from `arg y = -π/2` to `π/2`.
    pub fn y_boundary(&self) -> Vec<C> {
        let mut pts: Vec<C> = self.rays.iter().rev().map(|&(a, r)| C::from_polar(r, -a)).collect();
        pts.extend(self.rays.iter().skip(1).map(|&(a, r)| C::from_polar(r, a)));
        pts
    }

    /// Closed polygon of the right wing in the `Y`-plane, starting at `Y = 0`.
    pub fn right_wing(&self) -> Vec<C> {
        let mut pts = vec![C::new(0.0, 0.0)];
        pts.extend(self.y_boundary().iter().map(|y| C::from_polar(y.norm().cbrt(), y.arg() / 3.0)));
        pts
    }

    pub fn contains(&self, big_y: C) -> bool {
        let w = if big_y.re < 0.0 { -big_y } else { big_y };
        point_in_polygon(w, &self.right_wing())
    }

    /// Distance from `Y` to the union of both wings (zero inside).
    pub fn distance(&self, big_y: C) -> f64 {
        if self.contains(big_y) {
            return 0.0;
        }
        let w = if big_y.re < 0.0 { -big_y } else { big_y };
        let poly = self.right_wing();
        (0..poly.len())
            .map(|k| dist_to_segment(w, poly[k], poly[(k + 1) % poly.len()]))
            .fold(f64::INFINITY, f64::min)
    }
}

fn point_in_polygon(p: C, poly: &[C]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for k in 0..n {
        let (a, b) = (poly[k], poly[(k + 1) % n]);
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if p.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_root_seed() {
        let (c0, s, d) = seed_c0(C::new(0.2, 0.0)).unwrap();
        assert!(s.re < 0.0 && s.im == 0.0 && d.re > 0.5);
        assert!(discriminant_poly(c0, C::new(0.2, 0.0)).norm() < 1e-12);
        let r = cubic_roots(C::new(0.2, 0.0), c0);
        let near_d = r.iter().filter(|z| (**z - d).norm() < 1e-6).count();
        assert_eq!(near_d, 2);
    }

    #[test]
    fn phi_plug_in() {
        assert!((phi(i(), C::new(0.0, 0.0)).unwrap() - C::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((phi(i(), C::new(1.0, 0.0)).unwrap() - C::new(-2.0, 0.0)).norm() < 1e-15);
        assert_eq!(phi(C::new(0.0, 0.0), C::new(1.0, 0.0)), Err(Error::AtOrigin));
    }

    #[test]
    fn real_seed_value() {
        let sol = solve_c1_real(0.15).unwrap();
        assert!((sol.c1.re + 0.12057400565).abs() < 1e-9, "{}", sol.c1);
        assert!(sol.i12.abs() <= 1e-10 && sol.i23.abs() <= 1e-10);
    }
}
