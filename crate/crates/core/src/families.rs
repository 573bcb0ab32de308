//! The Laguerre and Jacobi families of quadratic differentials, their
//! zeros, parameter sweeps, and zeros of the corresponding classical
//! polynomials with varying parameters.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Factor, FactoredRational};
use crate::detector::{find_short_trajectory, ShortTrajectoryReport};
use crate::error::{Error, Result};
use crate::geometry::{point_polyline_distance, winding_number};
use crate::tracer::{TraceOptions, Trajectory};
use crate::ComplexPoint;

const DEGENERACY_TOL: f64 = 1e-12;
const MAX_DEGREE: usize = 200;
const MAX_ITERATIONS: usize = 500;

/// `(a(C), b(C)) = C + 2 ± 2√(C+1)` with the principal root.
pub fn laguerre_zeros(c: Complex64) -> (ComplexPoint, ComplexPoint) {
    let s = (c + 1.0).sqrt();
    (c + 2.0 + s * 2.0, c + 2.0 - s * 2.0)
}

/// `−D_C(z)/z² dz²` with `D_C(z) = z² − 2(C+2)z + C²`.
pub fn laguerre_qd(c: Complex64) -> Result<FactoredRational> {
    if !c.is_finite() {
        return Err(Error::DegenerateParams(format!("C = {c} is not finite")));
    }
    if (c + 1.0).norm() <= DEGENERACY_TOL {
        return Err(Error::DegenerateParams("C = -1: the two zeros coincide".into()));
    }
    if c.norm() <= DEGENERACY_TOL {
        return Err(Error::DegenerateParams("C = 0: a zero collides with the pole at 0".into()));
    }
    let (a, b) = laguerre_zeros(c);
    FactoredRational::new(
        Complex64::new(-1.0, 0.0),
        vec![Factor::new(a, 1), Factor::new(b, 1), Factor::new(Complex64::new(0.0, 0.0), -2)],
    )
}

/// Zeros of `D_{A,B}(z) = (A+B+2)²z² + 2(A²−B²)z + (A−B)² − 4(A+B+1)`.
pub fn jacobi_zeros(a: Complex64, b: Complex64) -> (ComplexPoint, ComplexPoint) {
    let s = 4.0 * ((a + 1.0) * (b + 1.0) * (a + b + 1.0)).sqrt();
    let d = (a + b + 2.0) * (a + b + 2.0);
    let lin = b * b - a * a;
    ((lin + s) / d, (lin - s) / d)
}

pub fn check_condition_ab(a: Complex64, b: Complex64) -> Result<()> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::ConditionABViolated("parameters must be finite".into()));
    }
    for (name, v) in [("A+1", a + 1.0), ("B+1", b + 1.0), ("A+B+1", a + b + 1.0), ("A+B+2", a + b + 2.0)] {
        if v.norm() <= DEGENERACY_TOL {
            return Err(Error::ConditionABViolated(format!("{name} = 0")));
        }
    }
    Ok(())
}

/// `−D_{A,B}(z)/(z²−1)² dz²`.
pub fn jacobi_qd(a: Complex64, b: Complex64) -> Result<FactoredRational> {
    check_condition_ab(a, b)?;
    let (za, zb) = jacobi_zeros(a, b);
    for z in [za, zb] {
        for p in [1.0, -1.0] {
            if (z - p).norm() <= 1e-12 {
                return Err(Error::ZeroPoleCollision(z));
            }
        }
    }
    let lead = a + b + 2.0;
    FactoredRational::new(
        -(lead * lead),
        vec![
            Factor::new(za, 1),
            Factor::new(zb, 1),
            Factor::new(Complex64::new(1.0, 0.0), -2),
            Factor::new(Complex64::new(-1.0, 0.0), -2),
        ],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyParams {
    Laguerre { c: Complex64 },
    Jacobi { a: Complex64, b: Complex64 },
}

impl FamilyParams {
    pub fn qd(&self) -> Result<FactoredRational> {
        match *self {
            FamilyParams::Laguerre { c } => laguerre_qd(c),
            FamilyParams::Jacobi { a, b } => jacobi_qd(a, b),
        }
    }

    pub fn zeros(&self) -> (ComplexPoint, ComplexPoint) {
        match *self {
            FamilyParams::Laguerre { c } => laguerre_zeros(c),
            FamilyParams::Jacobi { a, b } => jacobi_zeros(a, b),
        }
    }

    pub fn poles(&self) -> Vec<ComplexPoint> {
        match self {
            FamilyParams::Laguerre { .. } => vec![Complex64::new(0.0, 0.0)],
            FamilyParams::Jacobi { .. } => vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        }
    }

    /// Point at fraction `t` of the straight segment from `self` to `other`.
    pub fn lerp(&self, other: &Self, t: f64) -> Self {
        match (*self, *other) {
            (FamilyParams::Laguerre { c: c0 }, FamilyParams::Laguerre { c: c1 }) => {
                FamilyParams::Laguerre { c: c0 + (c1 - c0) * t }
            }
            (FamilyParams::Jacobi { a: a0, b: b0 }, FamilyParams::Jacobi { a: a1, b: b1 }) => {
                FamilyParams::Jacobi { a: a0 + (a1 - a0) * t, b: b0 + (b1 - b0) * t }
            }
            _ => *self,
        }
    }

    /// `samples` equally spaced parameters from `self` to `other`, both included.
    pub fn path_to(&self, other: &Self, samples: usize) -> Vec<Self> {
        match samples {
            0 => Vec::new(),
            1 => vec![*self],
            n => (0..n).map(|k| if k + 1 == n { *other } else { self.lerp(other, k as f64 / (n - 1) as f64) }).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub params: FamilyParams,
    pub report: ShortTrajectoryReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub samples: Vec<SweepSample>,
    /// `found` takes the same value at every resolved sample.
    pub dichotomy_ok: bool,
    pub all_found: bool,
    /// Consecutive connecting trajectories are homotopic through the moving
    /// zeros (checked on the loop they form with the zeros' paths).
    pub signature_constant: bool,
    /// Parameters inserted between samples while checking homotopy.
    pub refinements: usize,
}

/// Path of one zero between two parameters, refined so that each step is
/// short compared to the distance to the poles.
fn zero_path(p0: &FamilyParams, p1: &FamilyParams, from: ComplexPoint) -> Vec<ComplexPoint> {
    let poles = p0.poles();
    let pole_dist = |z: ComplexPoint| poles.iter().map(|&p| (z - p).norm()).fold(f64::INFINITY, f64::min);
    let pick = |t: f64, prev: ComplexPoint| {
        let (a, b) = p0.lerp(p1, t).zeros();
        if (a - prev).norm() <= (b - prev).norm() {
            a
        } else {
            b
        }
    };
    let mut out = vec![from];
    let mut stack = vec![(0.0f64, 1.0f64)];
    let mut z_now = from;
    // depth-first over [t0, t1] intervals, emitting points in order
    while let Some((t0, t1)) = stack.pop() {
        let z1 = pick(t1, z_now);
        if (z1 - z_now).norm() <= 0.25 * pole_dist(z_now) || t1 - t0 < 1e-9 {
            out.push(z1);
            z_now = z1;
        } else {
            let mid = 0.5 * (t0 + t1);
            stack.push((mid, t1));
            stack.push((t0, mid));
        }
    }
    out
}

/// Whether the connecting trajectories at two neighbouring parameters are
/// homotopic through the family: the loop they close with the zeros' paths
/// must have zero winding number about every pole.
fn transported(p0: &FamilyParams, t0: &Trajectory, p1: &FamilyParams, t1: &Trajectory) -> bool {
    let (Some(&a0), Some(&b0)) = (t0.vertices.first(), t0.vertices.last()) else {
        return false;
    };
    let conn_a = zero_path(p0, p1, a0);
    let conn_b = zero_path(p0, p1, b0);
    let (end_a, end_b) = (*conn_a.last().unwrap(), *conn_b.last().unwrap());
    let first1 = t1.vertices[0];
    let forward = (first1 - end_a).norm() <= (first1 - end_b).norm();
    let mut ring: Vec<ComplexPoint> = t0.vertices.clone();
    ring.extend(conn_b.iter().skip(1));
    if forward {
        ring.extend(t1.vertices.iter().rev().skip(1));
    } else {
        ring.extend(t1.vertices.iter().skip(1));
    }
    ring.extend(conn_a.iter().rev().skip(1));
    ring.pop();
    p0.poles().iter().all(|&p| winding_number(&ring, p) == 0)
}

/// Run the short-trajectory detector along `path`. `options` supplies the
/// trace options for each sample's differential.
pub fn sweep<F>(path: &[FamilyParams], options: F) -> Result<SweepResult>
where
    F: Fn(&FactoredRational) -> TraceOptions + Sync,
{
    for (i, p) in path.iter().enumerate() {
        let (a, b) = p.zeros();
        let degenerate = match *p {
            FamilyParams::Laguerre { c } => (c + 1.0).norm() < 1e-9 || c.norm() < 1e-9,
            FamilyParams::Jacobi { .. } => (a - b).norm() < 1e-9,
        };
        if degenerate {
            return Err(Error::DegenerateSample(i, format!("{p:?}")));
        }
        p.qd().map_err(|e| Error::DegenerateSample(i, e.to_string()))?;
    }
    let run = |p: &FamilyParams| -> Result<SweepSample> {
        let q = p.qd()?;
        let (a, b) = p.zeros();
        let report = find_short_trajectory(&q, a, b, &options(&q))?;
        Ok(SweepSample { params: *p, report })
    };
    let samples: Vec<SweepSample> = path.par_iter().map(run).collect::<Result<_>>()?;

    let resolved: Vec<bool> = samples.iter().filter(|s| s.report.resolved).map(|s| s.report.found).collect();
    let dichotomy_ok = resolved.windows(2).all(|w| w[0] == w[1]);
    let all_found = samples.iter().all(|s| s.report.found);

    let mut signature_constant = true;
    let mut refinements = 0;
    for w in samples.windows(2) {
        let (Some(t0), Some(t1)) = (&w[0].report.trajectory, &w[1].report.trajectory) else {
            continue;
        };
        if transported(&w[0].params, t0, &w[1].params, t1) {
            continue;
        }
        // bisect the step until neighbouring trajectories are close enough
        let mut chain = vec![(w[0].params, t0.clone()), (w[1].params, t1.clone())];
        let mut ok = false;
        'refine: for _ in 0..4 {
            let mut next = vec![chain[0].clone()];
            for pair in chain.windows(2) {
                let mid = pair[0].0.lerp(&pair[1].0, 0.5);
                refinements += 1;
                let Some(tm) = run(&mid)?.report.trajectory else {
                    break 'refine;
                };
                next.push((mid, tm));
                next.push(pair[1].clone());
            }
            chain = next;
            if chain.windows(2).all(|p| transported(&p[0].0, &p[0].1, &p[1].0, &p[1].1)) {
                ok = true;
                break;
            }
        }
        signature_constant &= ok;
    }
    Ok(SweepResult { samples, dichotomy_ok, all_found, signature_constant, refinements })
}

/// Coefficients in some basis, stored as `sign · exp(log_mag − shift)`.
fn normalized(logs: &[(f64, f64)]) -> Vec<f64> {
    let shift = logs.iter().map(|&(l, _)| l).fold(f64::NEG_INFINITY, f64::max);
    logs.iter().map(|&(l, s)| if l == f64::NEG_INFINITY { 0.0 } else { s * (l - shift).exp() }).collect()
}

/// `ln |binom(x, j)|` and its sign, as a product `∏ (x − i)/(i + 1)`.
fn log_binomial(x: f64, j: usize) -> (f64, f64) {
    let mut log = 0.0;
    let mut sign = 1.0;
    for i in 0..j {
        let t = x - i as f64;
        if t == 0.0 {
            return (f64::NEG_INFINITY, 0.0);
        }
        log += t.abs().ln() - ((i + 1) as f64).ln();
        if t < 0.0 {
            sign = -sign;
        }
    }
    (log, sign)
}

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

/// A polynomial given in one of two bases, evaluated with its derivative.
enum Basis {
    /// `Σ c_k z^k`.
    Monomial(Vec<f64>),
    /// `Σ c_k (z−1)^k (z+1)^{n−k}`.
    Jacobi(Vec<f64>),
}

impl Basis {
    fn degree(&self) -> usize {
        match self {
            Basis::Monomial(c) | Basis::Jacobi(c) => c.len() - 1,
        }
    }

    /// `(p(z), p'(z), Σ |c_k| |basis_k(z)|)`.
    fn eval(&self, z: Complex64) -> (Complex64, Complex64, f64) {
        match self {
            Basis::Monomial(c) => {
                let mut p = Complex64::new(0.0, 0.0);
                let mut dp = Complex64::new(0.0, 0.0);
                let mut scale = 0.0;
                let az = z.norm();
                for &ck in c.iter().rev() {
                    dp = dp * z + p;
                    p = p * z + ck;
                    scale = scale * az + ck.abs();
                }
                (p, dp, scale)
            }
            Basis::Jacobi(c) => {
                let n = c.len() - 1;
                let u = z - 1.0;
                let w = z + 1.0;
                let mut p = Complex64::new(0.0, 0.0);
                let mut dp = Complex64::new(0.0, 0.0);
                let mut scale = 0.0;
                for (k, &ck) in c.iter().enumerate() {
                    if ck == 0.0 {
                        continue;
                    }
                    let uk = u.powu(k as u32);
                    let wk = w.powu((n - k) as u32);
                    let term = uk * wk * ck;
                    p += term;
                    scale += term.norm();
                    if k > 0 {
                        dp += u.powu(k as u32 - 1) * wk * (ck * k as f64);
                    }
                    if k < n {
                        dp += uk * w.powu((n - k - 1) as u32) * (ck * (n - k) as f64);
                    }
                }
                (p, dp, scale)
            }
        }
    }
}

/// `p/p'` by the three-term recurrence. The monomial and Jacobi-basis
/// expansions lose all accuracy near the roots at moderate degree, so they
/// only certify the residual.
enum Recurrence {
    /// `L_n^{(α)}(s·z)`.
    Laguerre { n: usize, alpha: f64, s: f64 },
    /// `P_n^{(α, β)}(z)`.
    Jacobi { n: usize, alpha: f64, beta: f64 },
}

impl Recurrence {
    fn newton_ratio(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        // (p_{k-1}, p_k) and their derivatives, rescaled together when large
        let rescale = |v: &mut [Complex64; 4]| {
            let m = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
            if m > 1e100 {
                v.iter_mut().for_each(|x| *x /= m);
            }
        };
        match *self {
            Recurrence::Laguerre { n, alpha, s } => {
                let x = z * s;
                let mut v = [one, one + alpha - x, zero, Complex64::new(-s, 0.0)];
                for k in 1..n {
                    let kf = k as f64;
                    let a = (x * -1.0 + 2.0 * kf + 1.0 + alpha) / (kf + 1.0);
                    let b = (kf + alpha) / (kf + 1.0);
                    let p = a * v[1] - v[0] * b;
                    let dp = a * v[3] - v[1] * (s / (kf + 1.0)) - v[2] * b;
                    v = [v[1], p, v[3], dp];
                    rescale(&mut v);
                }
                v[1] / v[3]
            }
            Recurrence::Jacobi { n, alpha, beta } => {
                let ab = alpha + beta;
                let mut v = [one, (z - 1.0) * ((ab + 2.0) / 2.0) + alpha + 1.0, zero, Complex64::new((ab + 2.0) / 2.0, 0.0)];
                for k in 1..n {
                    let kf = k as f64;
                    let c = 2.0 * kf + ab;
                    let d = 2.0 * (kf + 1.0) * (kf + ab + 1.0) * c;
                    let lin = (c + 1.0) * (c + 2.0) * c / d;
                    let cst = (c + 1.0) * (alpha * alpha - beta * beta) / d;
                    let back = 2.0 * (kf + alpha) * (kf + beta) * (c + 2.0) / d;
                    let a = z * lin + cst;
                    let p = a * v[1] - v[0] * back;
                    let dp = a * v[3] + v[1] * lin - v[2] * back;
                    v = [v[1], p, v[3], dp];
                    rescale(&mut v);
                }
                v[1] / v[3]
            }
        }
    }
}

/// Aberth–Ehrlich iteration from points on a circle, certified by the
/// residual of the explicit expansion.
fn aberth(rec: &Recurrence, poly: &Basis, center: Complex64, radius: f64) -> Result<Vec<ComplexPoint>> {
    let n = poly.degree();
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| center + Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..MAX_ITERATIONS {
        let mut largest = 0.0f64;
        let mut next = z.clone();
        for i in 0..n {
            let ratio = rec.newton_ratio(z[i]);
            if !ratio.is_finite() {
                continue;
            }
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            next[i] = z[i] - step;
            largest = largest.max(step.norm() / (1.0 + z[i].norm()));
        }
        z = next;
        if largest < 1e-14 {
            break;
        }
    }
    let converged = z.iter().all(|&x| {
        let (p, _, scale) = poly.eval(x);
        x.is_finite() && p.norm() <= 1e-10 * scale
    });
    if !converged {
        return Err(Error::NonConvergence(MAX_ITERATIONS));
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(z)
}

fn check_degree(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(n, MAX_DEGREE));
    }
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    Ok(())
}

/// Zeros of `L_n^{(nC)}(nz) = Σ_k binom(n+nC, n−k) (−nz)^k / k!`.
pub fn laguerre_polynomial_zeros(n: usize, c: f64) -> Result<Vec<ComplexPoint>> {
    check_degree(n)?;
    let nf = n as f64;
    let logs: Vec<(f64, f64)> = (0..=n)
        .map(|k| {
            let (lb, sb) = log_binomial(nf + nf * c, n - k);
            let sign = if k % 2 == 0 { sb } else { -sb };
            (lb + k as f64 * nf.ln() - ln_factorial(k), sign)
        })
        .collect();
    let coeffs = normalized(&logs);
    let lead = coeffs[n];
    // roots are centred at their mean −c_{n−1}/(n c_n); Fujiwara's bound for the radius
    let center = -coeffs[n - 1] / (nf * lead);
    let radius = (0..n)
        .map(|k| (coeffs[k] / lead).abs().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max);
    let rec = Recurrence::Laguerre { n, alpha: nf * c, s: nf };
    aberth(&rec, &Basis::Monomial(coeffs), Complex64::new(center, 0.0), radius.max(1e-3))
}

/// Zeros of `P_n^{(nA, nB)}(z) ∝ Σ_k binom(n+nA, n−k) binom(n+nB, k) (z−1)^k (z+1)^{n−k}`.
pub fn jacobi_polynomial_zeros(n: usize, a: f64, b: f64) -> Result<Vec<ComplexPoint>> {
    check_degree(n)?;
    let nf = n as f64;
    let logs: Vec<(f64, f64)> = (0..=n)
        .map(|k| {
            let (l1, s1) = log_binomial(nf + nf * a, n - k);
            let (l2, s2) = log_binomial(nf + nf * b, k);
            (l1 + l2, s1 * s2)
        })
        .collect();
    let coeffs = normalized(&logs);
    if coeffs.iter().all(|&c| c == 0.0) {
        return Err(Error::DegenerateParams("the polynomial vanishes identically".into()));
    }
    let (za, zb) = jacobi_zeros(Complex64::new(a, 0.0), Complex64::new(b, 0.0));
    let center = (za + zb) * 0.5;
    let radius = ((za - zb).norm() * 0.75).max(0.5);
    let rec = Recurrence::Jacobi { n, alpha: nf * a, beta: nf * b };
    aberth(&rec, &Basis::Jacobi(coeffs), center, radius)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlayReport {
    pub fraction: f64,
    pub n: usize,
    pub tube: f64,
    /// No zeros were given; the fraction is 1 by convention.
    pub empty: bool,
}

/// Fraction of `zeros` within `tube` of the polyline `curve`.
pub fn zero_measure_overlay(zeros: &[ComplexPoint], curve: &[ComplexPoint], tube: f64) -> Result<OverlayReport> {
    if !(tube > 0.0) {
        return Err(Error::InvalidInput("tube must be positive".into()));
    }
    if curve.is_empty() {
        return Err(Error::InvalidInput("empty curve".into()));
    }
    if zeros.is_empty() {
        return Ok(OverlayReport { fraction: 1.0, n: 0, tube, empty: true });
    }
    let inside = zeros.iter().filter(|&&z| point_polyline_distance(z, curve) <= tube).count();
    Ok(OverlayReport { fraction: inside as f64 / zeros.len() as f64, n: zeros.len(), tube, empty: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre_zeros(c(3.0, 0.0)), (c(9.0, 0.0), c(1.0, 0.0)));
        assert_eq!(laguerre_zeros(c(8.0, 0.0)), (c(16.0, 0.0), c(4.0, 0.0)));
        assert_eq!(laguerre_zeros(c(-1.0, 0.0)), (c(1.0, 0.0), c(1.0, 0.0)));
        let q = laguerre_qd(c(3.0, 0.0)).unwrap();
        assert_eq!(q.coefficient(), c(-1.0, 0.0));
        assert!((q.evaluate(c(5.0, 0.0)).unwrap() - c(16.0 / 25.0, 0.0)).norm() < 1e-15);
        assert!(matches!(laguerre_qd(c(-1.0, 0.0)), Err(Error::DegenerateParams(_))));
        assert!(matches!(laguerre_qd(c(0.0, 0.0)), Err(Error::DegenerateParams(_))));
    }

    #[test]
    fn jacobi_examples() {
        let (a, b) = jacobi_zeros(c(1.0, 0.0), c(1.0, 0.0));
        assert!((a - c(3f64.sqrt() / 2.0, 0.0)).norm() < 1e-15);
        assert!((a + b).norm() < 1e-15);
        let (a, _) = jacobi_zeros(c(10.0, 0.0), c(10.0, 0.0));
        assert!((a.re - 21f64.sqrt() / 11.0).abs() < 1e-15);
        assert!(matches!(jacobi_qd(c(0.0, 0.0), c(0.0, 0.0)), Err(Error::ZeroPoleCollision(_))));
        assert!(matches!(jacobi_qd(c(-1.0, 0.0), c(2.0, 0.0)), Err(Error::ConditionABViolated(_))));
        assert!(matches!(jacobi_qd(c(1.0, 0.0), c(-2.0, 0.0)), Err(Error::ConditionABViolated(_))));
    }

    #[test]
    fn degree_one_hand_values() {
        // L₁^{(1)}(z) = 2 − z
        let z = laguerre_polynomial_zeros(1, 1.0).unwrap();
        assert!((z[0] - c(2.0, 0.0)).norm() < 1e-12);
        // P₁^{(1,1)}(z) = 2z
        let z = jacobi_polynomial_zeros(1, 1.0, 1.0).unwrap();
        assert!(z[0].norm() < 1e-12);
        assert_eq!(laguerre_polynomial_zeros(201, 1.0), Err(Error::DegreeTooLarge(201, 200)));
    }

    #[test]
    fn overlay_examples() {
        let curve = [c(0.0, 0.0), c(1.0, 0.0)];
        let on = [c(0.2, 0.0), c(0.9, 0.0)];
        assert_eq!(zero_measure_overlay(&on, &curve, 0.1).unwrap().fraction, 1.0);
        let r = zero_measure_overlay(&[], &curve, 0.1).unwrap();
        assert!(r.empty && r.fraction == 1.0);
        let half = [c(0.5, 0.05), c(0.5, 0.5)];
        assert_eq!(zero_measure_overlay(&half, &curve, 0.1).unwrap().fraction, 0.5);
    }

    #[test]
    fn path_sampling() {
        let p0 = FamilyParams::Laguerre { c: c(3.0, 0.0) };
        let p1 = FamilyParams::Laguerre { c: c(-0.95, 0.1) };
        let path = p0.path_to(&p1, 5);
        assert_eq!(path.len(), 5);
        assert_eq!(path[0], p0);
        assert_eq!(path[4], p1);
        assert_eq!(p0.path_to(&p1, 1), vec![p0]);
    }
}
