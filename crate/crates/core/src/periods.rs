//! Integrals of `√f` along arcs and closed contours, with boundary values on
//! either side of an arc that is itself a branch cut, and the quantization
//! checks for the Laguerre and Jacobi periods.
//!
//! A branch is always given by a [`BranchState`] somewhere in the plane and
//! carried to the arc along a route that crosses neither the arc (when a side
//! is requested) nor any extra cut.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{BranchState, FactoredRational};
use crate::error::{Error, Result};
use crate::families;
use crate::geometry::{open_ring, point_segment_distance, segment_crosses, winding_number};
use crate::quadrature::graded_nodes;
use crate::ComplexPoint;

/// Which boundary value of `√f` to take on an arc that is a cut.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Left of the arc's orientation.
    Plus,
    Minus,
    #[default]
    Off,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawArc")]
pub struct OrientedArc {
    pub vertices: Vec<ComplexPoint>,
    pub side: Side,
}

#[derive(Deserialize)]
struct RawArc {
    vertices: Vec<ComplexPoint>,
    #[serde(default)]
    side: Side,
}

impl TryFrom<RawArc> for OrientedArc {
    type Error = Error;

    fn try_from(raw: RawArc) -> Result<Self> {
        Self::new(raw.vertices, raw.side)
    }
}

impl OrientedArc {
    pub fn new(vertices: Vec<ComplexPoint>, side: Side) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidInput("an arc needs at least two vertices".into()));
        }
        if vertices.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidInput("arc vertices must be finite".into()));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("consecutive arc vertices must differ".into()));
        }
        Ok(Self { vertices, side })
    }

    pub fn off(vertices: Vec<ComplexPoint>) -> Result<Self> {
        Self::new(vertices, Side::Off)
    }

    pub fn with_side(&self, side: Side) -> Self {
        Self { vertices: self.vertices.clone(), side }
    }

    /// Reverse the orientation; the geometric side is kept, so Plus becomes Minus.
    pub fn reversed(&self) -> Self {
        let side = match self.side {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
            Side::Off => Side::Off,
        };
        Self { vertices: self.vertices.iter().rev().copied().collect(), side }
    }

    pub fn start(&self) -> ComplexPoint {
        self.vertices[0]
    }

    pub fn end(&self) -> ComplexPoint {
        self.vertices[self.vertices.len() - 1]
    }
}

/// Continue `√f` from `v0` at `path[0]` to the last point of `path`, with
/// substeps short enough that `arg √f` moves by at most about half a radian.
fn carry(f: &FactoredRational, path: &[ComplexPoint], v0: Complex64) -> Result<Complex64> {
    let total_mult: i32 = f.factors().iter().map(|x| x.mult.abs()).sum();
    let divisor = f64::from(total_mult.max(2));
    let mut v = v0;
    for w in path.windows(2) {
        let (mut z, end) = (w[0], w[1]);
        let mut substeps = 0usize;
        while z != end {
            let d = f.distance_to_critical(z);
            let remaining = (end - z).norm();
            let h = d / divisor;
            let next = if h >= remaining { end } else { z + (end - z) * (h / remaining) };
            if next == z || substeps > 1_000_000 {
                return Err(Error::BranchAmbiguity(z));
            }
            v = f.sqrt_near(next, v)?;
            if v.norm() == 0.0 {
                return Err(Error::BranchAmbiguity(next));
            }
            z = next;
            substeps += 1;
        }
    }
    Ok(v)
}

struct Landing {
    /// Where the route ends.
    point: ComplexPoint,
    /// Matching point on the integration path, a short step from `point`.
    on_path: ComplexPoint,
    /// Directions along which a ray may leave the landing point.
    directions: Vec<Complex64>,
}

fn fan(center: Complex64, half_width: f64, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let t = if count == 1 { 0.0 } else { -half_width + 2.0 * half_width * k as f64 / (count - 1) as f64 };
            center * Complex64::from_polar(1.0, t)
        })
        .collect()
}

fn full_fan() -> Vec<Complex64> {
    (0..36).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 36.0)).collect()
}

fn crosses_any(p: ComplexPoint, q: ComplexPoint, obstacles: &[&[ComplexPoint]]) -> bool {
    obstacles.iter().any(|o| segment_crosses(p, q, o))
}

/// Value of `√f` at one of the landing points, carried from `start` without
/// crossing any obstacle. Returns the index of the landing used.
fn branch_at_landing(
    f: &FactoredRational,
    start: &BranchState,
    landings: &[Landing],
    obstacles: &[&[ComplexPoint]],
) -> Result<(usize, Complex64)> {
    let anchor = start.anchor;
    let mut order: Vec<usize> = (0..landings.len()).collect();
    order.sort_by(|&i, &j| (landings[i].point - anchor).norm().total_cmp(&(landings[j].point - anchor).norm()));
    for &i in &order {
        let l = landings[i].point;
        if crosses_any(anchor, l, obstacles) {
            continue;
        }
        if let Ok(v) = carry(f, &[anchor, l], start.value) {
            return Ok((i, v));
        }
    }

    let criticals: Vec<ComplexPoint> = f.factors().iter().map(|x| x.root).collect();
    let bound = obstacles
        .iter()
        .flat_map(|o| o.iter())
        .chain(criticals.iter())
        .chain(landings.iter().map(|l| &l.point))
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if anchor.norm() <= bound {
        return Err(Error::BranchRouteBlocked);
    }
    let far = 2.0 * anchor.norm().max(bound);
    let mut best: Option<(f64, usize, ComplexPoint)> = None;
    for (i, l) in landings.iter().enumerate() {
        for &d in &l.directions {
            // |l + t d| = far, t > 0
            let b = (l.point * d.conj()).re;
            let t = -b + (b * b - l.point.norm_sqr() + far * far).sqrt();
            let exit = l.point + d * t;
            if crosses_any(l.point, exit, obstacles) {
                continue;
            }
            let clearance = criticals.iter().map(|&c| point_segment_distance(c, l.point, exit)).fold(f64::INFINITY, f64::min);
            if best.is_none_or(|(c, _, _)| clearance > c) {
                best = Some((clearance, i, exit));
            }
        }
    }
    let Some((_, i, exit)) = best else {
        return Err(Error::BranchRouteBlocked);
    };
    let a0 = anchor.arg();
    let mut sweep = (exit.arg() - a0).rem_euclid(TAU);
    if sweep > PI {
        sweep -= TAU;
    }
    let mut route = vec![anchor];
    let arc_points = 64;
    for k in 0..=arc_points {
        route.push(Complex64::from_polar(far, a0 + sweep * k as f64 / arc_points as f64));
    }
    route.push(exit);
    route.push(landings[i].point);
    Ok((i, carry(f, &route, start.value)?))
}

/// Quadrature nodes `(z, w·dz)` along `path`, with zero-weight routing nodes at
/// interior vertices and at the midpoint of segment `landing_seg`. Returns the
/// nodes and the index of the landing node.
fn path_nodes(path: &[ComplexPoint], panels: usize, landing_seg: usize) -> (Vec<(ComplexPoint, Complex64)>, usize) {
    let rule = graded_nodes(panels);
    let mut nodes = Vec::with_capacity((path.len() - 1) * (rule.len() + 1) + 1);
    let mut landing = 0;
    let zero = Complex64::new(0.0, 0.0);
    for (j, w) in path.windows(2).enumerate() {
        let dz = w[1] - w[0];
        if j > 0 {
            nodes.push((w[0], zero));
        }
        let mut placed = j != landing_seg;
        for &(t, wt) in &rule {
            if !placed && t > 0.5 {
                landing = nodes.len();
                nodes.push((w[0] + dz * 0.5, zero));
                placed = true;
            }
            nodes.push((w[0] + dz * t, dz * wt));
        }
    }
    (nodes, landing)
}

fn sum_from_landing(
    f: &FactoredRational,
    nodes: &[(ComplexPoint, Complex64)],
    landing: usize,
    v_land: Complex64,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut v = v_land;
    for k in landing + 1..nodes.len() {
        v = carry(f, &[nodes[k - 1].0, nodes[k].0], v)?;
        acc += v * nodes[k].1;
    }
    let mut v = v_land;
    for k in (0..landing).rev() {
        v = carry(f, &[nodes[k + 1].0, nodes[k].0], v)?;
        acc += v * nodes[k].1;
    }
    Ok(acc)
}

/// Panel doubling until two successive values agree within `1e-10(1 + |I|)`.
fn integrate_path(f: &FactoredRational, path: &[ComplexPoint], landing_seg: usize, v_land: Complex64) -> Result<Complex64> {
    let mut previous: Option<Complex64> = None;
    let mut panels = 1;
    loop {
        let (nodes, landing) = path_nodes(path, panels, landing_seg);
        let val = sum_from_landing(f, &nodes, landing, v_land)?;
        if let Some(p) = previous {
            if (val - p).norm() <= 1e-10 * (1.0 + val.norm()) || panels >= 256 {
                return Ok(val);
            }
        }
        previous = Some(val);
        panels *= 2;
    }
}

/// Poles may not touch the path; zeros only at its two ends.
fn check_path(f: &FactoredRational, path: &[ComplexPoint]) -> Result<()> {
    let tol = 1e-12 * f.scale();
    let last = path.len() - 1;
    for x in f.factors() {
        for (j, w) in path.windows(2).enumerate() {
            let d = point_segment_distance(x.root, w[0], w[1]);
            if d > tol {
                continue;
            }
            if x.mult < 0 {
                return Err(Error::PoleOnPath);
            }
            let at_start = j == 0 && (x.root - path[0]).norm() <= tol;
            let at_end = j == last - 1 && (x.root - path[last]).norm() <= tol;
            if !at_start && !at_end {
                return Err(Error::BranchAmbiguity(x.root));
            }
        }
    }
    Ok(())
}

/// Offset the vertices of `arc` by `eps` along the left (sign +1) or right
/// (sign −1) bisector normal. The two ends stay fixed.
fn offset_path(arc: &[ComplexPoint], eps: f64, sign: f64) -> Vec<ComplexPoint> {
    let n = arc.len();
    let mut out = arc.to_vec();
    for k in 1..n - 1 {
        let d_in = (arc[k] - arc[k - 1]).unscale((arc[k] - arc[k - 1]).norm());
        let d_out = (arc[k + 1] - arc[k]).unscale((arc[k + 1] - arc[k]).norm());
        let mut t = d_in + d_out;
        if t.norm() < 1e-12 {
            t = d_in;
        }
        let normal = Complex64::i() * t.unscale(t.norm());
        out[k] = arc[k] + normal * (sign * eps);
    }
    out
}

/// Candidate landings at segment midpoints, pushed `eps` to the requested
/// side so that they are off the arc even where the path is the arc itself.
fn landings_for(path: &[ComplexPoint], sign: f64, eps: f64) -> Vec<Landing> {
    let segs = path.len() - 1;
    let count = segs.min(32);
    (0..count)
        .map(|k| {
            let j = if count == 1 { 0 } else { k * (segs - 1) / (count - 1) };
            let mid = (path[j] + path[j + 1]) * 0.5;
            let t = path[j + 1] - path[j];
            let normal = Complex64::i() * t.unscale(t.norm()) * sign;
            let directions = if sign == 0.0 { full_fan() } else { fan(normal, 80f64.to_radians(), 17) };
            Landing { point: mid + normal * eps, on_path: mid, directions }
        })
        .collect()
}

fn landing_segment(path: &[ComplexPoint], index: usize) -> usize {
    let segs = path.len() - 1;
    let count = segs.min(32);
    if count == 1 {
        0
    } else {
        index * (segs - 1) / (count - 1)
    }
}

fn integrate_on(
    f: &FactoredRational,
    path: &[ComplexPoint],
    sign: f64,
    eps: f64,
    start: &BranchState,
    obstacles: &[&[ComplexPoint]],
) -> Result<Complex64> {
    let landings = landings_for(path, sign, eps);
    let (i, v) = branch_at_landing(f, start, &landings, obstacles)?;
    let v = carry(f, &[landings[i].point, landings[i].on_path], v)?;
    integrate_path(f, path, landing_segment(path, i), v)
}

/// `∫ √f dz` along `arc`, branch carried from `start`.
pub fn integrate_sqrt(f: &FactoredRational, arc: &OrientedArc, start: &BranchState) -> Result<Complex64> {
    integrate_sqrt_avoiding(f, arc, start, &[])
}

/// As [`integrate_sqrt`], with further cuts that the branch route must not cross.
pub fn integrate_sqrt_avoiding(
    f: &FactoredRational,
    arc: &OrientedArc,
    start: &BranchState,
    cuts: &[Vec<ComplexPoint>],
) -> Result<Complex64> {
    check_path(f, &arc.vertices)?;
    let mut obstacles: Vec<&[ComplexPoint]> = cuts.iter().map(Vec::as_slice).collect();
    let sign = match arc.side {
        Side::Off => return integrate_on(f, &arc.vertices, 0.0, 0.0, start, &obstacles),
        Side::Plus => 1.0,
        Side::Minus => -1.0,
    };
    obstacles.push(&arc.vertices);
    let eps = 1e-7 * f.scale();
    let coarse = integrate_on(f, &offset_path(&arc.vertices, eps, sign), sign, eps, start, &obstacles)?;
    let fine = integrate_on(f, &offset_path(&arc.vertices, eps / 2.0, sign), sign, eps / 2.0, start, &obstacles)?;
    if (coarse - fine).norm() > 1e-8 * (1.0 + fine.norm()) {
        return Err(Error::SideLimitUnstable);
    }
    Ok(fine)
}

/// `√f` at `point`, carried from `start` without crossing any of `cuts`.
pub fn branch_at(f: &FactoredRational, point: ComplexPoint, start: &BranchState, cuts: &[Vec<ComplexPoint>]) -> Result<Complex64> {
    let obstacles: Vec<&[ComplexPoint]> = cuts.iter().map(Vec::as_slice).collect();
    let landing = Landing { point, on_path: point, directions: full_fan() };
    branch_at_landing(f, start, &[landing], &obstacles).map(|(_, v)| v)
}

/// `∮ √f dz` around a closed polyline (the last vertex is joined to the
/// first). Without `start` the principal root at the first vertex is used.
pub fn contour_integral_sqrt(f: &FactoredRational, contour: &OrientedArc, start: Option<&BranchState>) -> Result<Complex64> {
    contour_integral_sqrt_avoiding(f, contour, start, &[])
}

pub fn contour_integral_sqrt_avoiding(
    f: &FactoredRational,
    contour: &OrientedArc,
    start: Option<&BranchState>,
    cuts: &[Vec<ComplexPoint>],
) -> Result<Complex64> {
    let ring = open_ring(&contour.vertices);
    if ring.len() < 3 {
        return Err(Error::InvalidInput("a contour needs at least three vertices".into()));
    }
    let mut closed = ring.to_vec();
    closed.push(ring[0]);
    let tol = 1e-12 * f.scale();
    for x in f.factors() {
        if closed.windows(2).any(|w| point_segment_distance(x.root, w[0], w[1]) <= tol) {
            return Err(if x.mult < 0 { Error::PoleOnPath } else { Error::BranchAmbiguity(x.root) });
        }
    }
    let enclosed: i32 = f.factors().iter().map(|x| x.mult * winding_number(ring, x.root)).sum();
    if enclosed % 2 != 0 {
        return Err(Error::BranchNotClosed);
    }
    let v0 = match start {
        Some(s) => branch_at(f, closed[0], s, cuts)?,
        None => BranchState::principal(f, closed[0])?.value,
    };
    // land on the first vertex: segment 0 starts there, so carry to its midpoint
    let v_mid = carry(f, &[closed[0], (closed[0] + closed[1]) * 0.5], v0)?;
    integrate_path(f, &closed, 0, v_mid)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndpointCheck {
    pub sqrt_d_at_1: Complex64,
    pub sqrt_d_at_minus_1: Complex64,
    pub expected_at_1: Complex64,
    pub expected_at_minus_1: Complex64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantizationResult {
    pub value: Complex64,
    pub matched: Option<Complex64>,
    pub admissible: Vec<Complex64>,
    /// Distance from `value` to the nearest admissible value.
    pub residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub endpoints: Option<EndpointCheck>,
}

fn quantize(value: Complex64, base: &[Complex64]) -> QuantizationResult {
    let two_pi_i = Complex64::new(0.0, TAU);
    let admissible: Vec<Complex64> = base.iter().flat_map(|&m| [two_pi_i * m, -two_pi_i * m]).collect();
    let largest = admissible.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tolerance = 1e-6 * (1.0 + largest);
    let (nearest, residual) = admissible
        .iter()
        .map(|&z| (z, (value - z).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("admissible set is nonempty");
    let matched = (residual <= tolerance).then_some(nearest);
    QuantizationResult { value, matched, admissible, residual, tolerance, endpoints: None }
}

fn anchor_radius(f: &FactoredRational, arc: &OrientedArc) -> f64 {
    let extent = arc.vertices.iter().map(|z| z.norm()).fold(f.scale(), f64::max);
    2.0 * extent + 1.0
}

/// `∫_γ (√D_C)₊ / t dt` with `√D_C ~ z` at infinity; `γ` should run from
/// `b(C)` to `a(C)`. The arc's side is ignored: the Plus value is taken.
pub fn laguerre_quantization(c: Complex64, arc: &OrientedArc) -> Result<QuantizationResult> {
    let f = families::laguerre_qd(c)?.negated();
    let start = BranchState::asymptotic(&f, Complex64::new(1.0, 0.0), anchor_radius(&f, arc))?;
    let value = integrate_sqrt(&f, &arc.with_side(Side::Plus), &start)?;
    Ok(quantize(value, &[Complex64::new(1.0, 0.0), c + 1.0]))
}

/// `∫_γ (√D_{A,B})₊ / (t² − 1) dt` with `√D ~ (A+B+2) z` at infinity, plus the
/// values of that branch at `±1`.
pub fn jacobi_quantization(a: Complex64, b: Complex64, arc: &OrientedArc) -> Result<QuantizationResult> {
    let f = families::jacobi_qd(a, b)?.negated();
    let lead = a + b + 2.0;
    let start = BranchState::asymptotic(&f, lead, anchor_radius(&f, arc))?;
    let value = integrate_sqrt(&f, &arc.with_side(Side::Plus), &start)?;
    let one = Complex64::new(1.0, 0.0);
    let mut result = quantize(value, &[one, a + 1.0, b + 1.0, a + b + 1.0]);

    let (za, zb) = families::jacobi_zeros(a, b);
    let d = FactoredRational::polynomial(lead * lead, &[za, zb])?;
    let d_start = BranchState::asymptotic(&d, lead, anchor_radius(&d, arc))?;
    let cut = vec![arc.vertices.clone()];
    let at_1 = branch_at(&d, one, &d_start, &cut)?;
    let at_m1 = branch_at(&d, -one, &d_start, &cut)?;
    let (e1, em1) = (a * 2.0, -b * 2.0);
    let holds = (at_1 - e1).norm() <= 1e-8 * (1.0 + e1.norm()) && (at_m1 - em1).norm() <= 1e-8 * (1.0 + em1.norm());
    result.endpoints = Some(EndpointCheck {
        sqrt_d_at_1: at_1,
        sqrt_d_at_minus_1: at_m1,
        expected_at_1: e1,
        expected_at_minus_1: em1,
        holds,
    });
    Ok(result)
}

/// Laguerre quantization over many parameters at once, each on its straight
/// segment from `b(C)` to `a(C)`.
pub fn laguerre_quantization_sweep(params: &[Complex64]) -> Vec<Result<QuantizationResult>> {
    params
        .par_iter()
        .map(|&c| {
            let (a, b) = families::laguerre_zeros(c);
            laguerre_quantization(c, &OrientedArc::off(vec![b, a])?)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub value: Complex64,
    pub real_part: f64,
    pub passes: bool,
}

/// `|Re ∫ √f dz| ≤ 1e-6 (1 + |∫ √f dz|)` along `arc`, for the principal
/// branch at the midpoint of its first segment (the sign does not matter).
pub fn condition_check(f: &FactoredRational, arc: &OrientedArc) -> Result<ConditionCheck> {
    let v = &arc.vertices;
    let start = BranchState::principal(f, (v[0] + v[1]) * 0.5)?;
    let value = integrate_sqrt(f, &arc.with_side(Side::Off), &start)?;
    let real_part = value.re;
    Ok(ConditionCheck { value, real_part, passes: real_part.abs() <= 1e-6 * (1.0 + value.norm()) })
}
