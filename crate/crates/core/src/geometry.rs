//! Planar polyline utilities: distances, intersections, winding.

use crate::ComplexPoint;

fn cross(a: ComplexPoint, b: ComplexPoint) -> f64 {
    a.re * b.im - a.im * b.re
}

fn dot(a: ComplexPoint, b: ComplexPoint) -> f64 {
    a.re * b.re + a.im * b.im
}

pub fn point_segment_distance(p: ComplexPoint, a: ComplexPoint, b: ComplexPoint) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (dot(p - a, ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Parameters `(s, t)` at which `a + s(b−a)` meets `c + t(d−c)`, if the
/// closed segments cross at a single point.
pub fn segment_intersection(
    a: ComplexPoint,
    b: ComplexPoint,
    c: ComplexPoint,
    d: ComplexPoint,
) -> Option<(f64, f64)> {
    let r = b - a;
    let s = d - c;
    let denom = cross(r, s);
    if denom == 0.0 {
        return None;
    }
    let t_ab = cross(c - a, s) / denom;
    let t_cd = cross(c - a, r) / denom;
    ((0.0..=1.0).contains(&t_ab) && (0.0..=1.0).contains(&t_cd)).then_some((t_ab, t_cd))
}

pub fn segment_segment_distance(a: ComplexPoint, b: ComplexPoint, c: ComplexPoint, d: ComplexPoint) -> f64 {
    if segment_intersection(a, b, c, d).is_some() {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

fn segments(poly: &[ComplexPoint]) -> impl Iterator<Item = (ComplexPoint, ComplexPoint)> + '_ {
    let single = (poly.len() == 1).then(|| (poly[0], poly[0]));
    poly.windows(2).map(|w| (w[0], w[1])).chain(single)
}

pub fn point_polyline_distance(p: ComplexPoint, poly: &[ComplexPoint]) -> f64 {
    Chunked::new(poly).point_distance(p)
}

#[derive(Clone, Copy)]
struct Bbox {
    lo: ComplexPoint,
    hi: ComplexPoint,
}

impl Bbox {
    fn of(a: ComplexPoint, b: ComplexPoint) -> Self {
        Self {
            lo: ComplexPoint::new(a.re.min(b.re), a.im.min(b.im)),
            hi: ComplexPoint::new(a.re.max(b.re), a.im.max(b.im)),
        }
    }

    fn union(&self, o: &Bbox) -> Self {
        Self {
            lo: ComplexPoint::new(self.lo.re.min(o.lo.re), self.lo.im.min(o.lo.im)),
            hi: ComplexPoint::new(self.hi.re.max(o.hi.re), self.hi.im.max(o.hi.im)),
        }
    }

    fn gap(&self, o: &Bbox) -> f64 {
        let dx = (o.lo.re - self.hi.re).max(self.lo.re - o.hi.re).max(0.0);
        let dy = (o.lo.im - self.hi.im).max(self.lo.im - o.hi.im).max(0.0);
        dx.hypot(dy)
    }
}

const CHUNK: usize = 32;

/// Segments grouped in runs of `CHUNK` with a bounding box per run, so that
/// distance queries can skip whole runs.
struct Chunked {
    segs: Vec<(ComplexPoint, ComplexPoint, Bbox)>,
    boxes: Vec<Bbox>,
}

impl Chunked {
    fn new(poly: &[ComplexPoint]) -> Self {
        let segs: Vec<_> = segments(poly).map(|(a, b)| (a, b, Bbox::of(a, b))).collect();
        let boxes = segs
            .chunks(CHUNK)
            .map(|c| c.iter().skip(1).fold(c[0].2, |acc, s| acc.union(&s.2)))
            .collect();
        Self { segs, boxes }
    }

    fn runs(&self) -> impl Iterator<Item = (&Bbox, &[(ComplexPoint, ComplexPoint, Bbox)])> {
        self.boxes.iter().zip(self.segs.chunks(CHUNK))
    }

    fn point_distance(&self, p: ComplexPoint) -> f64 {
        let pb = Bbox::of(p, p);
        let mut best = f64::INFINITY;
        for (bx, run) in self.runs() {
            if bx.gap(&pb) >= best {
                continue;
            }
            for &(a, b, _) in run {
                best = best.min(point_segment_distance(p, a, b));
            }
        }
        best
    }
}

/// Exact Euclidean distance between two polylines (segment against segment).
pub fn polyline_distance(a: &[ComplexPoint], b: &[ComplexPoint]) -> f64 {
    let (ca, cb) = (Chunked::new(a), Chunked::new(b));
    let mut best = f64::INFINITY;
    for (ba, run_a) in ca.runs() {
        for (bb, run_b) in cb.runs() {
            if ba.gap(bb) >= best {
                continue;
            }
            for &(p, q, sa) in run_a {
                if sa.gap(bb) >= best {
                    continue;
                }
                for &(c, d, sb) in run_b {
                    if sa.gap(&sb) >= best {
                        continue;
                    }
                    best = best.min(segment_segment_distance(p, q, c, d));
                    if best == 0.0 {
                        return 0.0;
                    }
                }
            }
        }
    }
    best
}

/// Vertices of `poly` plus interior points so that no gap exceeds `step`.
pub fn densify(poly: &[ComplexPoint], step: f64) -> Vec<ComplexPoint> {
    let mut out = Vec::with_capacity(poly.len());
    for w in poly.windows(2) {
        let n = ((w[1] - w[0]).norm() / step).ceil().max(1.0) as usize;
        for k in 0..n {
            out.push(w[0] + (w[1] - w[0]) * (k as f64 / n as f64));
        }
    }
    out.extend(poly.last().copied());
    out
}

/// Hausdorff distance between two polylines, sampling each at spacing `step`
/// against the other's exact segment geometry.
pub fn hausdorff(a: &[ComplexPoint], b: &[ComplexPoint], step: f64) -> f64 {
    let directed = |x: &[ComplexPoint], y: &[ComplexPoint]| {
        let y = Chunked::new(y);
        densify(x, step).iter().map(|&p| y.point_distance(p)).fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// First crossing of `a` with `b`, walking along `a`: returns the crossing
/// point with the segment indices and in-segment parameters on each.
pub fn first_crossing(a: &[ComplexPoint], b: &[ComplexPoint]) -> Option<Crossing> {
    let bs: Vec<_> = b.windows(2).map(|w| (w[0], w[1], Bbox::of(w[0], w[1]))).collect();
    for (i, w) in a.windows(2).enumerate() {
        let bb = Bbox::of(w[0], w[1]);
        let mut hit: Option<Crossing> = None;
        for (j, &(c, d, cb)) in bs.iter().enumerate() {
            if bb.gap(&cb) > 0.0 {
                continue;
            }
            if let Some((s, t)) = segment_intersection(w[0], w[1], c, d) {
                if hit.is_none_or(|h| s < h.s) {
                    hit = Some(Crossing { point: w[0] + (w[1] - w[0]) * s, seg_a: i, s, seg_b: j, t });
                }
            }
        }
        if hit.is_some() {
            return hit;
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub point: ComplexPoint,
    pub seg_a: usize,
    pub s: f64,
    pub seg_b: usize,
    pub t: f64,
}

/// Whether the segment `[p, q]` crosses any segment of `poly`.
pub fn segment_crosses(p: ComplexPoint, q: ComplexPoint, poly: &[ComplexPoint]) -> bool {
    poly.windows(2).any(|w| segment_intersection(p, q, w[0], w[1]).is_some())
}

/// Winding number of a closed polyline (last vertex joined to the first)
/// around `p`.
pub fn winding_number(poly: &[ComplexPoint], p: ComplexPoint) -> i32 {
    let n = poly.len();
    let mut total = 0.0;
    for i in 0..n {
        let a = poly[i] - p;
        let b = poly[(i + 1) % n] - p;
        total += (b / a).arg();
    }
    (total / std::f64::consts::TAU).round() as i32
}

/// Drop the closing vertex if it repeats the first one.
pub fn open_ring(poly: &[ComplexPoint]) -> &[ComplexPoint] {
    match poly {
        [first, .., last] if first == last => &poly[..poly.len() - 1],
        _ => poly,
    }
}

pub fn polyline_length(poly: &[ComplexPoint]) -> f64 {
    poly.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
}
