//! The zero level set `K` of `Re h`: critical trajectories of `f dη² < 0`
//! launched from the three branch points.
//!
//! Tracing is done in `μ = -iη`. Along a trajectory `Q dμ` is imaginary, so the
//! direction is `±i·conj(Q)/|Q|`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::boutroux::{q_value, BoutrouxSolution, Curve};
use crate::error::{Error, Result};
use crate::quad::{path_integral, Segment};
use crate::solution::{Bounds, GridField};
use crate::C;

pub const CAPTURE_TOL: f64 = 1e-6;
pub const R_MAX_FACTOR: f64 = 50.0;
pub const HORIZONTAL_TOL: f64 = 0.05;
pub const MAX_STEPS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Endpoint {
    Root1,
    Root2,
    Root3,
    Origin,
    UnboundedLeft,
    UnboundedRight,
}

impl Endpoint {
    fn root(j: usize) -> Self {
        [Endpoint::Root1, Endpoint::Root2, Endpoint::Root3][j]
    }

    fn is_unbounded(self) -> bool {
        matches!(self, Endpoint::UnboundedLeft | Endpoint::UnboundedRight)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryArc {
    /// Samples in the `η`-plane.
    pub points: Vec<C>,
    pub start: Endpoint,
    pub end: Endpoint,
    pub arclength: f64,
    /// Largest `|Re h|` seen along the arc after projection.
    pub max_drift: f64,
    /// `|Re|` of the unit `η`-direction at the last sample (unbounded arcs only).
    pub final_vertical: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    CaseI,
    CaseII,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetGraph {
    /// Distinct arcs.
    pub arcs: Vec<TrajectoryArc>,
    /// Number of traced trajectories before duplicates were merged.
    pub traces: usize,
    pub case: CaseTag,
}

fn pt_seg(p: C, a: C, b: C) -> f64 {
    let ab = b - a;
    if ab.norm_sqr() == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * ab.conj()).re / ab.norm_sqr();
    (p - (a + ab * t.clamp(0.0, 1.0))).norm()
}

fn directed(a: &[C], b: &[C]) -> f64 {
    a.iter()
        .map(|&p| {
            if b.len() == 1 {
                return (p - b[0]).norm();
            }
            b.windows(2).map(|w| pt_seg(p, w[0], w[1])).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two polylines.
pub fn hausdorff(a: &[C], b: &[C]) -> f64 {
    directed(a, b).max(directed(b, a))
}

struct Tracer {
    s: [C; 3],
    scale: f64,
}

impl Tracer {
    fn q(&self, mu: C) -> C {
        q_value(mu, &self.s)
    }

    /// Unit direction `i·conj(Q)/|Q|` with the sign closest to `prev`.
    fn dir(&self, mu: C, prev: C) -> (C, f64) {
        let q = self.q(mu);
        let d = C::new(0.0, 1.0) * q.conj() / q.norm();
        if (d * prev.conj()).re >= 0.0 {
            (d, 1.0)
        } else {
            (-d, -1.0)
        }
    }

    fn trace(&self, j: usize, theta: f64) -> Result<TrajectoryArc> {
        let s = self.s;
        let gaps = [(s[0] - s[1]).norm(), (s[1] - s[2]).norm(), (s[0] - s[2]).norm()];
        let min_gap = gaps.iter().cloned().fold(f64::INFINITY, f64::min).min(s.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min));
        let h0 = 1e-3 * min_gap;
        let r_max = R_MAX_FACTOR * self.scale;
        let mut d_prev = C::from_polar(1.0, theta);
        let mut mu = s[j] + d_prev * h0;
        let mut pts = vec![s[j], mu];
        let mut re_h = self.chord_integral(s[j], mu, d_prev)?.re;
        let mut len = h0;
        let mut max_drift = re_h.abs();
        for _ in 0..MAX_STEPS {
            let dists: Vec<f64> = s.iter().map(|r| (mu - *r).norm()).collect();
            for (k, &dk) in dists.iter().enumerate() {
                if k != j && dk < CAPTURE_TOL * self.scale.max(1.0) {
                    pts.push(s[k]);
                    return Ok(self.finish(pts, j, Endpoint::root(k), len, max_drift, 0.0));
                }
            }
            if mu.norm() < CAPTURE_TOL * self.scale.max(1.0) {
                pts.push(C::new(0.0, 0.0));
                return Ok(self.finish(pts, j, Endpoint::Origin, len, max_drift, 0.0));
            }
            let (d, _) = self.dir(mu, d_prev);
            if mu.norm() > r_max {
                let end = if mu.im > 0.0 { Endpoint::UnboundedLeft } else { Endpoint::UnboundedRight };
                return Ok(self.finish(pts, j, end, len, max_drift, d.re.abs()));
            }
            let near = dists
                .iter()
                .enumerate()
                .map(|(k, &dk)| if k == j { dk.max(h0) } else { dk })
                .fold(f64::INFINITY, f64::min);
            let step = (0.25 * near).min(0.25 * mu.norm()).min((0.02 * self.scale).max(0.05 * mu.norm()));
            if step < 1e-14 * self.scale {
                return Err(Error::TraceStall(format!("step underflow at η = {}", C::new(0.0, 1.0) * mu)));
            }
            // midpoint rule on the direction field
            let (dm, _) = self.dir(mu + d * (0.5 * step), d);
            let mut next = mu + dm * step;
            let (d_next, sg_next) = self.dir(next, dm);
            let mut re_next = re_h + self.chord_integral(mu, next, dm)?.re;
            // project back onto Re h = 0
            let qn = sg_next * self.q(next);
            if qn.norm() > 0.0 && re_next.abs() > 0.0 {
                let delta = -re_next * qn.conj() / qn.norm_sqr();
                if delta.norm() < 0.1 * step {
                    let corr = 0.5 * (qn + sg_next * self.q(next + delta)) * delta;
                    next += delta;
                    re_next += corr.re;
                }
            }
            max_drift = max_drift.max(re_next.abs());
            len += (next - mu).norm();
            mu = next;
            re_h = re_next;
            d_prev = d_next;
            pts.push(mu);
        }
        Err(Error::TraceStall(format!("no termination from root {}", j + 1)))
    }

    /// `∫ Q dμ` on the chord from `a` to `b`, with the sign of `Q` fixed by `d`.
    fn chord_integral(&self, a: C, b: C, d: C) -> Result<C> {
        let path = Segment { a, b };
        path_integral(&path, |m| self.dir(m, d).1 * self.q(m), 1e-12)
    }

    fn finish(&self, pts: Vec<C>, j: usize, end: Endpoint, len: f64, drift: f64, vert: f64) -> TrajectoryArc {
        TrajectoryArc {
            points: pts.into_iter().map(|m| C::new(0.0, 1.0) * m).collect(),
            start: Endpoint::root(j),
            end,
            arclength: len,
            max_drift: drift,
            final_vertical: vert,
        }
    }
}

/// The three launch angles in `μ` at a simple root `s` of `Q²`: with
/// `Q² ≈ k(μ-s)`, `Re ∫ Q dμ = 0` forces `arg k + 3θ ≡ π`.
pub fn launch_angles(curve: &Curve, j: usize) -> [f64; 3] {
    let s = curve.s();
    let mut k = C::new(1.0, 0.0) / (s[j] * s[j] * s[j]);
    for (m, r) in s.iter().enumerate() {
        if m != j {
            k *= s[j] - r;
        }
    }
    let base = (PI - k.arg()) / 3.0;
    [base, base + 2.0 * PI / 3.0, base + 4.0 * PI / 3.0]
}

/// One trajectory from root `j` (0-based) launched at angle `theta` in `μ`.
pub fn trace_single(curve: &Curve, j: usize, theta: f64) -> Result<TrajectoryArc> {
    let s = *curve.s();
    let scale = s.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Tracer { s, scale }.trace(j, theta)
}

fn same_arc(a: &TrajectoryArc, b: &TrajectoryArc, tol: f64) -> bool {
    let ends_match = (a.start == b.end && a.end == b.start) || (a.start == b.start && a.end == b.end);
    ends_match && hausdorff(&a.points, &b.points) < tol
}

/// Traces all nine trajectories and merges the ones traced from both ends.
#[allow(non_snake_case)]
pub fn trace_K(sol: &BoutrouxSolution) -> Result<LevelSetGraph> {
    trace_curve(&sol.curve)
}

#[allow(non_snake_case)]
pub fn trace_curve(curve: &Curve) -> Result<LevelSetGraph> {
    let s = *curve.s();
    let scale = s.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tracer = Tracer { s, scale };
    let mut traced = Vec::new();
    for j in 0..3 {
        for th in launch_angles(curve, j) {
            traced.push(tracer.trace(j, th)?);
        }
    }
    let traces = traced.len();
    let tol = 1e-3 * scale;
    let mut arcs: Vec<TrajectoryArc> = Vec::new();
    for t in traced {
        if !arcs.iter().any(|a| same_arc(a, &t, tol)) {
            arcs.push(t);
        }
    }
    let origin = arcs.iter().filter(|a| a.end == Endpoint::Origin).count();
    let left = arcs.iter().filter(|a| a.end == Endpoint::UnboundedLeft).count();
    let right = arcs.iter().filter(|a| a.end == Endpoint::UnboundedRight).count();
    if origin > 1 || left > 1 || right > 1 {
        return Err(Error::StructureViolation(format!(
            "{origin} arcs to the origin, {left}/{right} unbounded left/right"
        )));
    }
    let count = |x: Endpoint, y: Endpoint| {
        arcs.iter().filter(|a| (a.start == x && a.end == y) || (a.start == y && a.end == x)).count()
    };
    let case_i = arcs.len() == 6
        && count(Endpoint::Root1, Endpoint::Origin) == 1
        && count(Endpoint::Root2, Endpoint::Root3) == 1
        && count(Endpoint::Root1, Endpoint::Root2) == 2
        && count(Endpoint::Root3, Endpoint::UnboundedLeft) == 1
        && count(Endpoint::Root3, Endpoint::UnboundedRight) == 1;
    let case = if case_i {
        CaseTag::CaseI
    } else if arcs.len() == 6 {
        CaseTag::CaseII
    } else {
        return Err(Error::StructureViolation(format!("{} distinct arcs", arcs.len())));
    };
    Ok(LevelSetGraph { arcs, traces, case })
}

impl LevelSetGraph {
    /// Largest distance from the imaginary `η`-axis over the arcs that join
    /// `is₁` to `0` and `is₂` to `is₃`.
    pub fn axis_distance(&self) -> f64 {
        self.arcs
            .iter()
            .filter(|a| {
                matches!(
                    (a.start, a.end),
                    (Endpoint::Root1, Endpoint::Origin)
                        | (Endpoint::Root2, Endpoint::Root3)
                        | (Endpoint::Root3, Endpoint::Root2)
                )
            })
            .flat_map(|a| a.points.iter().map(|p| p.re.abs()))
            .fold(0.0, f64::max)
    }

    /// Largest Hausdorff distance from a reflected arc `η ↦ -η̄` to the
    /// nearest arc of the graph; unbounded arcs are cut at the common radius.
    pub fn reflection_defect(&self) -> f64 {
        let r_cut = self
            .arcs
            .iter()
            .filter(|a| a.end.is_unbounded())
            .map(|a| a.points.iter().map(|p| p.norm()).fold(0.0, f64::max))
            .fold(f64::INFINITY, f64::min);
        let clip = |a: &TrajectoryArc| -> Vec<C> { a.points.iter().cloned().filter(|p| p.norm() <= r_cut).collect() };
        self.arcs
            .iter()
            .map(|a| {
                let refl: Vec<C> = clip(a).iter().map(|p| -p.conj()).collect();
                self.arcs.iter().map(|b| hausdorff(&refl, &clip(b))).fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    pub fn max_drift(&self) -> f64 {
        self.arcs.iter().map(|a| a.max_drift).fold(0.0, f64::max)
    }

    /// Largest `|Re direction|` at `R_max` over the unbounded arcs, in `η`.
    pub fn max_nonhorizontal(&self) -> f64 {
        self.arcs.iter().filter(|a| a.end.is_unbounded()).map(|a| a.final_vertical).fold(0.0, f64::max)
    }

    pub fn origin_enclosed(&self) -> bool {
        let loops: Vec<&TrajectoryArc> = self
            .arcs
            .iter()
            .filter(|a| matches!((a.start, a.end), (Endpoint::Root1, Endpoint::Root2) | (Endpoint::Root2, Endpoint::Root1)))
            .collect();
        if loops.len() != 2 {
            return false;
        }
        let mut ring: Vec<C> = loops[0].points.clone();
        let mut second = loops[1].points.clone();
        if (ring.last().unwrap() - second[0]).norm() > (ring.last().unwrap() - second.last().unwrap()).norm() {
            second.reverse();
        }
        ring.extend(second);
        winding_number(&ring, C::new(0.0, 0.0)) != 0
    }
}

fn winding_number(ring: &[C], p: C) -> i64 {
    let mut total = 0.0;
    for k in 0..ring.len() {
        let a = ring[k] - p;
        let b = ring[(k + 1) % ring.len()] - p;
        total += (b / a).arg();
    }
    (total / (2.0 * PI)).round() as i64
}

/// `Re h(η)` with `Re h(is₃) = 0`.
pub fn re_h(eta: C, sol: &BoutrouxSolution) -> Result<f64> {
    let k = sol.curve.k_constant()?;
    sol.curve.re_h(-C::new(0.0, 1.0) * eta, k)
}

/// Sign of `Re h` on an `η` grid; NaN on the cuts and at the origin.
pub fn sign_chart(sol: &BoutrouxSolution, bounds: Bounds, nx: usize, ny: usize) -> Result<GridField> {
    let k = sol.curve.k_constant()?;
    let s = *sol.curve.s();
    let hx = (bounds.re_max - bounds.re_min) / (nx.max(2) - 1) as f64;
    let hy = (bounds.im_max - bounds.im_min) / (ny.max(2) - 1) as f64;
    let guard = 0.5 * hx.min(hy);
    let mut field = GridField { bounds, nx, ny, values: vec![f64::NAN; nx * ny] };
    for jy in 0..ny {
        for ix in 0..nx {
            let eta = field.point(ix, jy);
            let mu = -C::new(0.0, 1.0) * eta;
            let on_cut = pt_seg(mu, s[0], C::new(0.0, 0.0)) < guard || pt_seg(mu, s[1], s[2]) < guard;
            if on_cut || mu.norm() < guard {
                continue;
            }
            let v = sol.curve.re_h(mu, k)?;
            field.values[jy * nx + ix] = v.signum();
        }
    }
    Ok(field)
}

/// Spread of `Re h` at the three branch points.
pub fn re_h_at_roots(sol: &BoutrouxSolution) -> Result<[f64; 3]> {
    let k = sol.curve.k_constant()?;
    let s = *sol.curve.s();
    Ok([sol.curve.re_h(s[0], k)?, sol.curve.re_h(s[1], k)?, sol.curve.re_h(s[2], k)?])
}
