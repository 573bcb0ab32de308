//! Corner-angle bookkeeping for polygons bounded by trajectory arcs.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::algebra::{FactoredRational, Site};
use crate::error::{Error, Result};
use crate::tracer::Trajectory;
use crate::ComplexPoint;

const SNAP_TOL: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonVertex {
    /// Order of `q` at the corner (0 for a regular corner).
    pub order: i32,
    /// Interior angle in `[0, 2π]`.
    pub angle: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolygon")]
pub struct PolygonData {
    pub vertices: Vec<PolygonVertex>,
    /// Orders of the singular points strictly inside.
    pub interior_orders: Vec<i32>,
}

#[derive(Deserialize)]
struct RawPolygon {
    vertices: Vec<PolygonVertex>,
    #[serde(default)]
    interior_orders: Vec<i32>,
}

impl TryFrom<RawPolygon> for PolygonData {
    type Error = Error;

    fn try_from(raw: RawPolygon) -> Result<Self> {
        Self::new(raw.vertices, raw.interior_orders)
    }
}

impl PolygonData {
    pub fn new(vertices: Vec<PolygonVertex>, interior_orders: Vec<i32>) -> Result<Self> {
        for v in &vertices {
            if !(0.0..=TAU).contains(&v.angle) {
                return Err(Error::InvalidInput(format!("angle {} outside [0, 2π]", v.angle)));
            }
            if v.order < -1 {
                return Err(Error::InvalidInput(format!("corner order {} below -1", v.order)));
            }
        }
        Ok(Self { vertices, interior_orders })
    }
}

/// `Σ (1 − θ_j (n_j + 2)/(2π)) − 2 − Σ n_i`; zero for a genuine polygon.
pub fn teichmuller_residual(p: &PolygonData) -> f64 {
    let boundary: f64 = p.vertices.iter().map(|v| 1.0 - v.angle * f64::from(v.order + 2) / TAU).sum();
    let inside: i32 = p.interior_orders.iter().sum();
    boundary - 2.0 - f64::from(inside)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleMeasurement {
    pub raw: f64,
    /// Nearest multiple of `π/(n+2)`, if within 0.05 rad of `raw`.
    pub snapped: Option<f64>,
    pub order: i32,
}

impl AngleMeasurement {
    pub fn value(&self) -> f64 {
        self.snapped.unwrap_or(self.raw)
    }
}

/// Direction in which `edge` leaves `vertex`, looking from the end that
/// touches it (`prefer_end` picks which end to try first).
fn leaving_direction(vertex: ComplexPoint, edge: &[ComplexPoint], prefer_end: bool, tol: f64) -> Result<f64> {
    let (first, last) = match (edge.first(), edge.last()) {
        (Some(&f), Some(&l)) => (f, l),
        _ => return Err(Error::EdgesDontMeet),
    };
    let d_first = (first - vertex).norm();
    let d_last = (last - vertex).norm();
    let from_end = if prefer_end { d_last <= tol || d_last < d_first } else { d_first > tol && d_last < d_first };
    if d_first.min(d_last) > tol {
        return Err(Error::EdgesDontMeet);
    }
    let walk: Box<dyn Iterator<Item = &ComplexPoint>> =
        if from_end { Box::new(edge.iter().rev()) } else { Box::new(edge.iter()) };
    let extent = edge.iter().map(|z| (z - vertex).norm()).fold(0.0, f64::max);
    let probe = (1e-2 * vertex.norm().max(1.0)).min(0.25 * extent);
    let far = walk.copied().find(|z| (z - vertex).norm() > probe).ok_or(Error::EdgesDontMeet)?;
    Ok((far - vertex).arg())
}

/// Interior angle at `vertex` between the arriving edge and the departing
/// edge, on the side of the sector that contains `interior_witness`.
pub fn measure_interior_angle(
    q: &FactoredRational,
    vertex: ComplexPoint,
    edge_in: &Trajectory,
    edge_out: &Trajectory,
    interior_witness: ComplexPoint,
) -> Result<AngleMeasurement> {
    let tol = 1e-3 * vertex.norm().max(1.0);
    let a_in = leaving_direction(vertex, &edge_in.vertices, true, tol)?;
    let a_out = leaving_direction(vertex, &edge_out.vertices, false, tol)?;
    let sector = (a_out - a_in).rem_euclid(TAU);
    let witness = (interior_witness - vertex).arg();
    let raw = if (witness - a_in).rem_euclid(TAU) < sector { sector } else { TAU - sector };

    let order = match q.factor_at(vertex) {
        Some(f) => q.site_order(Site::Finite(f.root)),
        None => 0,
    };
    let snapped = if order >= -1 {
        let unit = PI / f64::from(order + 2);
        let k = (raw / unit).round();
        ((raw - k * unit).abs() <= SNAP_TOL).then_some(k * unit)
    } else {
        None
    };
    Ok(AngleMeasurement { raw, snapped, order })
}
