//! Horizontal and vertical trajectories of `q(z) dz²`.
//!
//! A horizontal trajectory is integrated in its φ-arclength parameter `s`,
//! `dz/ds = 1/√q`, so that `∫√q dz = s` is real and increasing along it.
//! Vertical trajectories use `dz/ds = i/√q`. The branch of `√q` is carried
//! from step to step by nearest-root selection.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{advance_sqrt, local_data, CriticalPoint, FactoredRational, LocalData, Site};
use crate::error::{Error, Result};
use crate::geometry::point_segment_distance;
use crate::ode::dopri5_step;
use crate::quadrature::graded_nodes;
use crate::ComplexPoint;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    #[default]
    Horizontal,
    Vertical,
}

impl TraceKind {
    /// `√q dz` is a positive multiple of this along the trajectory.
    pub fn factor(self) -> Complex64 {
        match self {
            TraceKind::Horizontal => Complex64::new(1.0, 0.0),
            TraceKind::Vertical => Complex64::i(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    pub hit_radius: f64,
    pub escape_radius: f64,
    pub max_phi_length: f64,
    pub max_steps: usize,
    pub rel_tol: f64,
}

impl TraceOptions {
    /// Scale-free defaults derived from `S = max(1, max |critical point|)`.
    ///
    /// The φ-length budget is `100·S` multiplied by the φ-size of the escape
    /// circle, `1 + max |√q| R`, so that rays can actually reach `|z| = R`
    /// when `q` grows at infinity.
    pub fn for_differential(q: &FactoredRational) -> Self {
        let s = q.scale();
        let escape_radius = 10.0 * s + 10.0;
        let growth = (0..16)
            .map(|k| {
                let z = Complex64::from_polar(escape_radius, TAU * k as f64 / 16.0);
                q.evaluate(z).map_or(0.0, |v| v.norm().sqrt()) * escape_radius
            })
            .fold(0.0, f64::max);
        Self {
            hit_radius: 1e-4 * s,
            escape_radius,
            max_phi_length: 100.0 * s * (1.0 + growth),
            max_steps: 200_000,
            rel_tol: 1e-10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [self.hit_radius, self.escape_radius, self.max_phi_length, self.rel_tol]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if !positive || self.max_steps == 0 {
            return Err(Error::InvalidInput("trace options must all be positive".into()));
        }
        if self.hit_radius >= self.escape_radius {
            return Err(Error::InvalidInput("hit_radius must be smaller than escape_radius".into()));
        }
        Ok(())
    }

    pub fn with_hit_radius(mut self, hit_radius: f64) -> Self {
        self.hit_radius = hit_radius;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    /// Entered the hit radius of a zero or simple pole.
    HitCriticalPoint { point: ComplexPoint },
    /// Entered the hit radius of a pole of order two or more.
    DivergedToPole { point: ComplexPoint },
    /// Left the escape disk; the index refers to [`asymptotic_directions`]
    /// when infinity is a pole of order at least three.
    EscapedToInfinity { direction_index: Option<usize> },
    ClosedLoop,
    Budget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub vertices: Vec<ComplexPoint>,
    /// `√q` at each vertex (zero at a zero of `q`); not part of the JSON form.
    #[serde(skip)]
    pub sqrt_values: Vec<Complex64>,
    pub phi_length: f64,
    pub termination: Termination,
}

impl Trajectory {
    pub fn hit_point(&self) -> Option<ComplexPoint> {
        match self.termination {
            Termination::HitCriticalPoint { point } => Some(point),
            _ => None,
        }
    }

    /// Same curve, traversed backwards. The termination is kept as is.
    pub fn reversed(&self) -> Self {
        let mut t = self.clone();
        t.vertices.reverse();
        t.sqrt_values.reverse();
        t
    }
}

pub(crate) fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

pub(crate) fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Directions of the `r + 2` trajectories leaving a point of order `r ≥ −1`,
/// sorted in `[0, 2π)`. Adjacent horizontal rays are `2π/(r+2)` apart; the
/// vertical family is shifted by `π/(r+2)`.
pub fn emanation_directions(d: &LocalData, kind: TraceKind) -> Result<Vec<f64>> {
    if d.order <= -2 {
        return Err(Error::InfiniteCriticalPoint(d.order));
    }
    let m = d.order + 2;
    let shift = match kind {
        TraceKind::Horizontal => 0.0,
        TraceKind::Vertical => PI,
    };
    let mut dirs: Vec<f64> = (0..m)
        .map(|k| normalize_angle((TAU * k as f64 + shift - d.leading.arg()) / f64::from(m)))
        .collect();
    dirs.sort_by(f64::total_cmp);
    Ok(dirs)
}

/// Critical directions at infinity for horizontal trajectories.
pub fn asymptotic_directions(q: &FactoredRational) -> Result<Vec<f64>> {
    asymptotic_directions_for(q, TraceKind::Horizontal)
}

pub fn asymptotic_directions_for(q: &FactoredRational, kind: TraceKind) -> Result<Vec<f64>> {
    let pole_order = -q.order_at_infinity();
    if pole_order <= 2 {
        return Err(Error::NotHigherOrderPole(pole_order));
    }
    let m = pole_order - 2;
    let shift = match kind {
        TraceKind::Horizontal => 0.0,
        TraceKind::Vertical => PI,
    };
    let mut dirs: Vec<f64> = (0..m)
        .map(|k| normalize_angle((TAU * k as f64 + shift - q.coefficient().arg()) / f64::from(m)))
        .collect();
    dirs.sort_by(f64::total_cmp);
    Ok(dirs)
}

/// Weighted root centroid `Σ mᵢzᵢ / Σ mᵢ`. Near infinity `q ≈ c (z − m)^n`,
/// so escaping trajectories are asymptotic to rays from `m` rather than from
/// the origin. Zero when `Σ mᵢ = 0`.
pub fn asymptotic_center(q: &FactoredRational) -> ComplexPoint {
    let n = q.degree_at_infinity();
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    q.factors().iter().map(|f| f.root * f64::from(f.mult)).sum::<Complex64>() / f64::from(n)
}

fn nearest_direction(dirs: &[f64], angle: f64) -> Option<usize> {
    dirs.iter()
        .enumerate()
        .min_by(|a, b| angular_distance(*a.1, angle).total_cmp(&angular_distance(*b.1, angle)))
        .map(|(i, _)| i)
}

/// `∫_{z0}^{z1} √q dz` along the straight segment, with the branch fixed by
/// `v1 = √q(z1)`. `z0` may be a zero or a simple pole.
fn radial_integral(q: &FactoredRational, z0: ComplexPoint, z1: ComplexPoint, v1: Complex64) -> Result<Complex64> {
    let dz = z1 - z0;
    let mut prev = z1;
    let mut v = v1;
    let mut acc = Complex64::new(0.0, 0.0);
    for &(t, w) in graded_nodes(4).iter().rev() {
        let z = z0 + dz * t;
        v = advance_sqrt(q, prev, v, z)?;
        prev = z;
        acc += v * w;
    }
    Ok(acc * dz)
}

/// Adaptive φ-length of a single segment.
fn segment_phi_length(q: &FactoredRational, a: ComplexPoint, b: ComplexPoint) -> Result<f64> {
    let len = (b - a).norm();
    if len == 0.0 {
        return Ok(0.0);
    }
    let tol = 1e-12 * q.scale();
    for p in q.poles() {
        let d = point_segment_distance(p.root, a, b);
        let at_end = (p.root - a).norm() <= tol || (p.root - b).norm() <= tol;
        if d <= tol && (p.mult <= -2 || !at_end) {
            return Err(Error::PoleOnPath);
        }
    }
    let mut panels = 2;
    let mut previous: Option<f64> = None;
    loop {
        let mut acc = 0.0;
        for (t, w) in graded_nodes(panels) {
            acc += w * q.evaluate(a + (b - a) * t)?.norm().sqrt();
        }
        let val = acc * len;
        if let Some(p) = previous {
            if (val - p).abs() <= 1e-10 * val.abs().max(f64::MIN_POSITIVE) || panels >= 4096 {
                return Ok(val);
            }
        }
        previous = Some(val);
        panels *= 2;
    }
}

/// `∫ √|q| |dz|` along a polyline.
pub fn phi_length(q: &FactoredRational, polyline: &[ComplexPoint]) -> Result<f64> {
    polyline.windows(2).map(|w| segment_phi_length(q, w[0], w[1])).sum()
}

struct Launch {
    vertices: Vec<ComplexPoint>,
    sqrt_values: Vec<Complex64>,
    s: f64,
    /// Critical source and its launch radius.
    source: Option<(ComplexPoint, f64)>,
    /// Start point and initial tangent, for closed-loop detection.
    loop_check: Option<(ComplexPoint, Complex64)>,
}

/// Step off a critical point of order `order` along (approximately) `theta`,
/// correcting the angle so that the launch point lies on the exact trajectory.
fn launch_from_critical(
    q: &FactoredRational,
    z0: ComplexPoint,
    order: i32,
    theta: f64,
    rho: f64,
    kind: TraceKind,
) -> Result<Launch> {
    let kappa = kind.factor();
    let half_m = f64::from(order + 2) / 2.0;
    let mut theta = theta;
    let mut z1 = z0;
    let mut v1 = Complex64::new(0.0, 0.0);
    let mut integral = Complex64::new(0.0, 0.0);
    for _ in 0..12 {
        let dir = Complex64::from_polar(1.0, theta);
        z1 = z0 + dir * rho;
        let w = q.evaluate(z1)?.sqrt();
        v1 = if (w * dir / kappa).re >= 0.0 { w } else { -w };
        integral = radial_integral(q, z0, z1, v1)? / kappa;
        if integral.im.abs() <= 1e-15 * integral.norm() {
            break;
        }
        // arg of the integral grows like (r+2)/2 · θ near the critical point
        theta -= integral.im / (half_m * integral.re);
    }
    let (vertices, sqrt_values) = if order > 0 {
        (vec![z0, z1], vec![Complex64::new(0.0, 0.0), v1])
    } else {
        (vec![z1], vec![v1])
    };
    Ok(Launch { vertices, sqrt_values, s: integral.re, source: Some((z0, rho)), loop_check: None })
}

/// Trace a trajectory of `q dz²` from `start` in (approximately) `direction`.
///
/// At a regular start the trajectory through `start` whose tangent is within
/// 90° of `direction` is followed. At a zero or simple pole `direction` must be
/// one of [`emanation_directions`] (within `1e-6`).
pub fn trace(
    q: &FactoredRational,
    start: ComplexPoint,
    direction: f64,
    opts: &TraceOptions,
    kind: TraceKind,
) -> Result<Trajectory> {
    opts.validate()?;
    if let Some(f) = q.factor_at(start) {
        if f.mult <= -2 {
            return Err(Error::StartsAtInfiniteCriticalPoint(start));
        }
        let d = local_data(q, Site::Finite(f.root));
        let dirs = emanation_directions(&d, kind)?;
        let theta = dirs
            .iter()
            .copied()
            .find(|&t| angular_distance(t, direction) <= 1e-6)
            .ok_or(Error::NotAnEmanationDirection(direction))?;
        return trace_critical_ray(q, f.root, f.mult, theta, opts, kind);
    }
    let kappa = kind.factor();
    let dir = Complex64::from_polar(1.0, direction);
    let w = q.evaluate(start)?.sqrt();
    let v0 = if (kappa / w * dir.conj()).re >= 0.0 { w } else { -w };
    let launch = Launch {
        vertices: vec![start],
        sqrt_values: vec![v0],
        s: 0.0,
        source: None,
        loop_check: Some((start, kappa / v0)),
    };
    integrate(q, launch, opts, kind)
}

fn trace_critical_ray(
    q: &FactoredRational,
    z0: ComplexPoint,
    order: i32,
    theta: f64,
    opts: &TraceOptions,
    kind: TraceKind,
) -> Result<Trajectory> {
    let others = q
        .factors()
        .iter()
        .filter(|f| f.root != z0)
        .map(|f| (f.root - z0).norm())
        .fold(f64::INFINITY, f64::min);
    let rho = (0.5 * opts.hit_radius).min(0.05 * others);
    let launch = launch_from_critical(q, z0, order, theta, rho, kind)?;
    integrate(q, launch, opts, kind)
}

/// Minimise `|z(σ) − target|` over `σ ∈ [0, h]` with fresh steps from `(z, v)`.
fn closest_approach<F>(
    field: &mut F,
    z: ComplexPoint,
    k1: Complex64,
    h: f64,
    target: ComplexPoint,
) -> Result<Option<(f64, ComplexPoint, Complex64)>>
where
    F: FnMut(Complex64) -> Result<Option<(Complex64, Complex64)>>,
{
    let mut eval = |sigma: f64| -> Result<Option<(ComplexPoint, Complex64)>> {
        if sigma == 0.0 {
            return Ok(Some((z, k1)));
        }
        Ok(dopri5_step(field, z, k1, sigma)?.map(|st| (st.y, st.k_end)))
    };
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, h);
    for _ in 0..60 {
        let a = hi - golden * (hi - lo);
        let b = lo + golden * (hi - lo);
        let (Some((za, _)), Some((zb, _))) = (eval(a)?, eval(b)?) else {
            return Ok(None);
        };
        if (za - target).norm() < (zb - target).norm() {
            hi = b;
        } else {
            lo = a;
        }
    }
    let sigma = 0.5 * (lo + hi);
    Ok(eval(sigma)?.map(|(zs, ks)| (sigma, zs, ks)))
}

fn integrate(q: &FactoredRational, launch: Launch, opts: &TraceOptions, kind: TraceKind) -> Result<Trajectory> {
    let kappa = kind.factor();
    let asym = asymptotic_directions_for(q, kind).ok();
    let Launch { mut vertices, mut sqrt_values, mut s, source, loop_check } = launch;
    let mut z = *vertices.last().expect("launch has a vertex");
    let mut v = *sqrt_values.last().expect("launch has a value");
    let mut k = kappa / v;
    let mut left_source = source.is_none();
    let mut h = 0.1 * q.distance_to_critical(z) * v.norm();
    let mut steps = 0usize;
    let mut farthest = 0.0f64;

    let finish = |vertices: Vec<ComplexPoint>, sqrt_values: Vec<Complex64>, s: f64, termination| {
        Ok(Trajectory { vertices, sqrt_values, phi_length: s, termination })
    };

    loop {
        if steps >= opts.max_steps || s >= opts.max_phi_length {
            return finish(vertices, sqrt_values, s, Termination::Budget);
        }
        let dist = q.distance_to_critical(z).min(opts.escape_radius);
        h = h.min(0.5 * dist * v.norm());
        if !(h > 1e-15 * (1.0 + s)) {
            return finish(vertices, sqrt_values, s, Termination::Budget);
        }
        let v_ref = v;
        let mut field = |w: Complex64| -> Result<Option<(Complex64, Complex64)>> {
            let val = match q.evaluate(w) {
                Ok(val) => val,
                Err(Error::PoleEvaluation(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            let r = val.sqrt();
            if r.norm() == 0.0 || !r.is_finite() {
                return Ok(None);
            }
            let r = if (r - v_ref).norm() <= (r + v_ref).norm() { r } else { -r };
            if (r - v_ref).norm() > 0.75 * v_ref.norm().max(r.norm()) {
                return Ok(None);
            }
            Ok(Some((kappa / r, r)))
        };
        let Some(step) = dopri5_step(&mut field, z, k, h)? else {
            h *= 0.25;
            continue;
        };
        let err_phi = step.err * v.norm().max(step.aux_end.norm());
        let ratio = err_phi / (opts.rel_tol * h);
        if !(ratio <= 1.0) {
            h *= if ratio.is_finite() { (0.9 * ratio.powf(-0.25)).max(0.2) } else { 0.2 };
            continue;
        }

        let (z_prev, k_prev, s_prev) = (z, k, s);
        z = step.y;
        v = step.aux_end;
        k = step.k_end;
        s += h;
        steps += 1;
        vertices.push(z);
        sqrt_values.push(v);

        if z.norm() > opts.escape_radius {
            let direction_index = asym.as_deref().and_then(|d| nearest_direction(d, (z - asymptotic_center(q)).arg()));
            return finish(vertices, sqrt_values, s, Termination::EscapedToInfinity { direction_index });
        }

        if let Some((src, rho)) = source {
            if !left_source && (z - src).norm() > 4.0 * rho.max(opts.hit_radius) {
                left_source = true;
            }
        }
        for f in q.factors() {
            if !left_source && source.is_some_and(|(src, _)| src == f.root) {
                continue;
            }
            if point_segment_distance(f.root, z_prev, z) >= opts.hit_radius {
                continue;
            }
            if f.mult <= -2 {
                return finish(vertices, sqrt_values, s, Termination::DivergedToPole { point: f.root });
            }
            if f.mult > 0 {
                s += segment_phi_length(q, z, f.root)?;
                vertices.push(f.root);
                sqrt_values.push(Complex64::new(0.0, 0.0));
            }
            return finish(vertices, sqrt_values, s, Termination::HitCriticalPoint { point: f.root });
        }

        if let Some((start, tangent0)) = loop_check {
            let chord = (z - z_prev).norm();
            let away = farthest > 10.0 * opts.hit_radius;
            farthest = farthest.max((z - start).norm());
            if away && point_segment_distance(start, z_prev, z) < 0.5 * chord + opts.hit_radius {
                if let Some((sigma, zc, kc)) = closest_approach(&mut field, z_prev, k_prev, h, start)? {
                    let turn = angular_distance(kc.arg(), tangent0.arg());
                    if (zc - start).norm() < opts.hit_radius && turn < 1e-3 {
                        vertices.pop();
                        sqrt_values.pop();
                        vertices.push(start);
                        sqrt_values.push(kappa / kc);
                        return finish(vertices, sqrt_values, s_prev + sigma, Termination::ClosedLoop);
                    }
                }
            }
        }

        h *= if ratio > 0.0 { (0.9 * ratio.powf(-0.25)).min(5.0) } else { 5.0 };
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    /// Index into [`CriticalGraph::sources`].
    pub source: usize,
    /// Emanation index at the source.
    pub index: usize,
    pub direction: f64,
    pub trajectory: Trajectory,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Adjacency {
    /// Source indices, smaller first; equal for a loop back to the source.
    pub pair: (usize, usize),
    /// Indices into [`CriticalGraph::rays`].
    pub rays: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalGraph {
    pub sources: Vec<CriticalPoint>,
    pub rays: Vec<Ray>,
    pub adjacency: Vec<Adjacency>,
}

impl CriticalGraph {
    pub fn source_index(&self, p: ComplexPoint) -> Option<usize> {
        self.sources.iter().position(|c| matches!(c.site, Site::Finite(z) if (z - p).norm() <= 1e-12 * (1.0 + p.norm())))
    }

    /// Whether some critical ray joins the sources at `a` and `b`.
    pub fn connects(&self, a: ComplexPoint, b: ComplexPoint) -> bool {
        let (Some(i), Some(j)) = (self.source_index(a), self.source_index(b)) else {
            return false;
        };
        let key = (i.min(j), i.max(j));
        self.adjacency.iter().any(|adj| adj.pair == key)
    }

    pub fn rays_from(&self, source: usize) -> impl Iterator<Item = &Ray> {
        self.rays.iter().filter(move |r| r.source == source)
    }
}

/// Every ray from a single finite critical point, in emanation order.
pub fn critical_rays(
    q: &FactoredRational,
    point: ComplexPoint,
    opts: &TraceOptions,
    kind: TraceKind,
) -> Result<Vec<(f64, Trajectory)>> {
    opts.validate()?;
    let f = *q.factor_at(point).ok_or(Error::InvalidInput(format!("{point} is not a root")))?;
    let d = local_data(q, Site::Finite(f.root));
    let dirs = emanation_directions(&d, kind)?;
    dirs.par_iter()
        .map(|&theta| trace_critical_ray(q, f.root, f.mult, theta, opts, kind).map(|t| (theta, t)))
        .collect()
}

/// Trace every horizontal ray from every zero and simple pole.
pub fn critical_graph(q: &FactoredRational, opts: &TraceOptions) -> Result<CriticalGraph> {
    opts.validate()?;
    let sources: Vec<CriticalPoint> = q
        .critical_points()
        .into_iter()
        .filter(|c| matches!(c.site, Site::Finite(_)) && c.order >= -1)
        .collect();
    if sources.is_empty() {
        return Err(Error::NoFiniteCriticalPoint);
    }
    let mut jobs = Vec::new();
    for (i, c) in sources.iter().enumerate() {
        let Site::Finite(z) = c.site else { unreachable!() };
        let d = local_data(q, c.site);
        for (k, theta) in emanation_directions(&d, TraceKind::Horizontal)?.into_iter().enumerate() {
            jobs.push((i, k, z, theta));
        }
    }
    let rays: Vec<Ray> = jobs
        .par_iter()
        .map(|&(i, k, z, theta)| {
            trace_critical_ray(q, z, sources[i].order, theta, opts, TraceKind::Horizontal)
                .map(|trajectory| Ray { source: i, index: k, direction: theta, trajectory })
        })
        .collect::<Result<_>>()?;

    let mut adjacency: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let graph_stub = CriticalGraph { sources: sources.clone(), rays: Vec::new(), adjacency: Vec::new() };
    for (idx, ray) in rays.iter().enumerate() {
        if let Some(j) = ray.trajectory.hit_point().and_then(|p| graph_stub.source_index(p)) {
            let key = (ray.source.min(j), ray.source.max(j));
            adjacency.entry(key).or_default().push(idx);
        }
    }
    let adjacency = adjacency.into_iter().map(|(pair, rays)| Adjacency { pair, rays }).collect();
    Ok(CriticalGraph { sources, rays, adjacency })
}
