//! Short trajectories between two zeros: certification by endpoint hits,
//! the distance between the two sets of critical rays, crossing-parity
//! signatures, and the orthogonal-trajectory obstruction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::FactoredRational;
use crate::error::{Error, Result};
use crate::geometry::{first_crossing, point_polyline_distance, polyline_distance};
use crate::periods::{integrate_sqrt, OrientedArc};
use crate::tracer::{critical_rays, TraceKind, TraceOptions, Termination, Trajectory};
use crate::{BranchState, ComplexPoint};

/// Crossing parity of an arc with the downward vertical cut from each finite pole.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomotopySignature {
    pub parities: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShortTrajectoryReport {
    pub found: bool,
    /// The connecting trajectory, oriented from the first zero to the second.
    pub trajectory: Option<Trajectory>,
    pub distance: f64,
    pub unbroken: Option<bool>,
    pub signature: Option<HomotopySignature>,
    /// False when some ray ran out of budget, or the distance stayed inside
    /// the refinement band; the verdict is then not certified.
    pub resolved: bool,
    /// Distinct connecting trajectories seen.
    pub connections: usize,
    /// Hit radius of the final attempt.
    pub hit_radius: f64,
}

fn require_zero(q: &FactoredRational, z: ComplexPoint) -> Result<ComplexPoint> {
    match q.factor_at(z) {
        Some(f) if f.mult > 0 => Ok(f.root),
        _ => Err(Error::NotAZero(z)),
    }
}

/// The `r + 2` horizontal rays from a zero of order `r`.
pub fn gamma_set(q: &FactoredRational, zero: ComplexPoint, opts: &TraceOptions) -> Result<Vec<Trajectory>> {
    let z = require_zero(q, zero)?;
    Ok(critical_rays(q, z, opts, TraceKind::Horizontal)?.into_iter().map(|(_, t)| t).collect())
}

/// Euclidean distance between two sets of polylines, segment against segment.
pub fn min_distance(a: &[Trajectory], b: &[Trajectory]) -> f64 {
    let mut best = f64::INFINITY;
    for x in a {
        for y in b {
            best = best.min(polyline_distance(&x.vertices, &y.vertices));
        }
    }
    best
}

/// Vertices of `t` before it enters a small disk about the pole it diverges
/// to. Rays spiralling into the same pole come arbitrarily close to each
/// other without any connection, so that part is left out of the distance.
fn clipped<'a>(q: &FactoredRational, t: &'a Trajectory) -> &'a [ComplexPoint] {
    let Termination::DivergedToPole { point } = t.termination else {
        return &t.vertices;
    };
    let others = q.factors().iter().filter(|f| f.root != point).map(|f| (f.root - point).norm());
    let radius = 0.05 * others.fold(f64::INFINITY, f64::min).min(1.0);
    let end = t.vertices.iter().position(|z| (z - point).norm() < radius).unwrap_or(t.vertices.len());
    &t.vertices[..end.max(1)]
}

fn ray_set_distance(q: &FactoredRational, a: &[Trajectory], b: &[Trajectory]) -> f64 {
    let mut best = f64::INFINITY;
    for x in a {
        for y in b {
            best = best.min(polyline_distance(clipped(q, x), clipped(q, y)));
        }
    }
    best
}

fn hits(t: &Trajectory, target: ComplexPoint) -> bool {
    t.hit_point().is_some_and(|p| p == target)
}

/// Certify a horizontal trajectory joining the zeros `a` and `b`.
///
/// A distance between the two ray sets in `[2, 10]·hit_radius` without a hit
/// is inconclusive; the search is then repeated with a ten times smaller hit
/// radius, at most three times. Rays diverging to a pole of order two or
/// more are measured only up to a small disk about that pole.
pub fn find_short_trajectory(
    q: &FactoredRational,
    a: ComplexPoint,
    b: ComplexPoint,
    opts: &TraceOptions,
) -> Result<ShortTrajectoryReport> {
    let a = require_zero(q, a)?;
    let b = require_zero(q, b)?;
    if a == b {
        return Err(Error::ZerosCoincide);
    }
    let mut opts = *opts;
    let mut attempt = 0;
    loop {
        let rays_a = gamma_set(q, a, &opts)?;
        let rays_b = gamma_set(q, b, &opts)?;
        let distance = ray_set_distance(q, &rays_a, &rays_b);
        let from_a: Vec<&Trajectory> = rays_a.iter().filter(|t| hits(t, b)).collect();
        let from_b: Vec<&Trajectory> = rays_b.iter().filter(|t| hits(t, a)).collect();
        let found = !from_a.is_empty() || !from_b.is_empty();
        let budget = rays_a.iter().chain(&rays_b).any(|t| t.termination == Termination::Budget);
        let in_band = !found && distance <= 10.0 * opts.hit_radius;
        if in_band && attempt < 3 {
            attempt += 1;
            opts = opts.with_hit_radius(opts.hit_radius / 10.0);
            continue;
        }
        if !found {
            return Ok(ShortTrajectoryReport {
                found,
                trajectory: None,
                distance,
                unbroken: None,
                signature: None,
                resolved: !budget && !in_band,
                connections: 0,
                hit_radius: opts.hit_radius,
            });
        }
        let trajectory = match from_a.first() {
            Some(t) => (*t).clone(),
            None => from_b[0].reversed(),
        };
        let interior = &trajectory.vertices[1..trajectory.vertices.len() - 1];
        let unbroken = interior.is_empty()
            || q.finite_critical_points().filter(|f| f.root != a && f.root != b).all(|f| {
                point_polyline_distance(f.root, interior) > opts.hit_radius
            });
        let poles: Vec<ComplexPoint> = q.poles().map(|f| f.root).collect();
        let signature = homotopy_signature(&trajectory.vertices, &poles)?;
        return Ok(ShortTrajectoryReport {
            found,
            trajectory: Some(trajectory),
            distance,
            unbroken: Some(unbroken),
            signature: Some(signature),
            resolved: true,
            connections: from_a.len().max(from_b.len()),
            hit_radius: opts.hit_radius,
        });
    }
}

/// Parity of crossings of `arc` with the downward vertical ray from each pole.
/// A cut through an arc vertex is moved sideways by `1e-9` first.
pub fn homotopy_signature(arc: &[ComplexPoint], poles: &[ComplexPoint]) -> Result<HomotopySignature> {
    let mut parities = Vec::with_capacity(poles.len());
    for &p in poles {
        if point_polyline_distance(p, arc) <= 1e-12 * (1.0 + p.norm()) {
            return Err(Error::ArcThroughPole);
        }
        let mut x = p.re;
        while arc.iter().any(|z| (z.re - x).abs() < 1e-12 * (1.0 + x.abs())) {
            x += 1e-9 * (1.0 + x.abs());
        }
        let mut odd = false;
        for w in arc.windows(2) {
            let (z0, z1) = (w[0], w[1]);
            if (z0.re < x) != (z1.re < x) {
                let y = z0.im + (x - z0.re) / (z1.re - z0.re) * (z1.im - z0.im);
                if y < p.im {
                    odd = !odd;
                }
            }
        }
        parities.push(odd);
    }
    Ok(HomotopySignature { parities })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Obstruction {
    /// `∫ √q dz` along the ray from `a` up to the crossing point, then the
    /// vertical arc from there to `b`.
    pub integral: Complex64,
    /// `|Im ∫ √q dz|`: the φ-length of the vertical part; zero exactly when
    /// `b` lies on the ray.
    pub witness: f64,
    pub intersection: Option<ComplexPoint>,
    pub degenerate: bool,
}

/// Obstruction to a horizontal connection from `a` to `b`: follow the ray
/// from `a` that passes closest to `b` (within `|a − b|/4`), then return to
/// `b` along a vertical trajectory.
pub fn orthogonal_obstruction(
    q: &FactoredRational,
    a: ComplexPoint,
    b: ComplexPoint,
    opts: &TraceOptions,
) -> Result<Obstruction> {
    let a = require_zero(q, a)?;
    let b = require_zero(q, b)?;
    if a == b {
        return Err(Error::ZerosCoincide);
    }
    let rays = gamma_set(q, a, opts)?;
    let (ray, dist) = rays
        .iter()
        .map(|t| (t, point_polyline_distance(b, &t.vertices)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("a zero has at least three rays");
    if dist > 0.25 * (a - b).norm() {
        return Err(Error::NoNearbyRay);
    }
    let start = BranchState { anchor: ray.vertices[1], value: ray.sqrt_values[1] };
    if hits(ray, b) {
        let integral = integrate_sqrt(q, &OrientedArc::off(ray.vertices.clone())?, &start)?;
        return Ok(Obstruction { integral, witness: integral.im.abs(), intersection: Some(b), degenerate: true });
    }

    let verticals = critical_rays(q, b, opts, TraceKind::Vertical)?;
    let mut best: Option<(f64, Vec<ComplexPoint>, ComplexPoint)> = None;
    for (_, v) in &verticals {
        let Some(x) = first_crossing(&v.vertices, &ray.vertices) else {
            continue;
        };
        // ray from a up to the crossing, then the vertical arc back to b
        let mut path: Vec<ComplexPoint> = ray.vertices[..=x.seg_b].to_vec();
        if x.point != *path.last().unwrap() {
            path.push(x.point);
        }
        for &z in v.vertices[1..=x.seg_a].iter().rev() {
            if z != *path.last().unwrap() {
                path.push(z);
            }
        }
        if *path.last().unwrap() != b {
            path.push(b);
        }
        let along = x.seg_a as f64 + x.s;
        if best.as_ref().is_none_or(|(d, _, _)| along < *d) {
            best = Some((along, path, x.point));
        }
    }
    let Some((_, path, point)) = best else {
        return Err(Error::NoNearbyRay);
    };
    let integral = integrate_sqrt(q, &OrientedArc::off(path)?, &start)?;
    Ok(Obstruction { integral, witness: integral.im.abs(), intersection: Some(point), degenerate: false })
}
