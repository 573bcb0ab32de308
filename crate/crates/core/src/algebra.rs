//! Factored rational functions `q(z) = c·∏(z − zᵢ)^{mᵢ}` and the branch
//! bookkeeping for `√q`.
//!
//! A quadratic differential is always handled as `q(z) dz²`; the point at
//! infinity is tagged separately ([`Site::Infinity`]) and never stored as a
//! coordinate pair.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ComplexPoint;

/// Relative tolerance used to decide that a point coincides with a root.
const ROOT_MATCH_TOL: f64 = 1e-12;
/// Relative tolerance for the real/imaginary vanishing tests on residues.
const RESIDUE_ZERO_TOL: f64 = 1e-9;
/// Maximum number of bisections before a continuation step is declared ambiguous.
const MAX_BISECTIONS: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub root: ComplexPoint,
    pub mult: i32,
}

impl Factor {
    pub fn new(root: ComplexPoint, mult: i32) -> Self {
        Self { root, mult }
    }
}

#[derive(Deserialize)]
struct RawRational {
    coefficient: Complex64,
    factors: Vec<Factor>,
}

/// `q(z) = coefficient · ∏ (z − rootᵢ)^{multᵢ}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRational")]
pub struct FactoredRational {
    coefficient: Complex64,
    factors: Vec<Factor>,
}

impl TryFrom<RawRational> for FactoredRational {
    type Error = Error;

    fn try_from(raw: RawRational) -> Result<Self> {
        Self::new(raw.coefficient, raw.factors)
    }
}

impl FactoredRational {
    pub fn new(coefficient: Complex64, factors: Vec<Factor>) -> Result<Self> {
        if !coefficient.is_finite() || coefficient.norm() == 0.0 {
            return Err(Error::InvalidInput("coefficient must be finite and nonzero".into()));
        }
        for (i, f) in factors.iter().enumerate() {
            if !f.root.is_finite() {
                return Err(Error::InvalidInput(format!("root {i} is not finite")));
            }
            if f.mult == 0 {
                return Err(Error::InvalidInput(format!("root {i} has multiplicity 0")));
            }
            for g in &factors[..i] {
                if (g.root - f.root).norm() <= ROOT_MATCH_TOL * (1.0 + f.root.norm()) {
                    return Err(Error::InvalidInput(format!(
                        "roots must be pairwise distinct ({} repeated)",
                        f.root
                    )));
                }
            }
        }
        Ok(Self { coefficient, factors })
    }

    /// Polynomial with the given roots (each simple) and leading coefficient.
    pub fn polynomial(leading: Complex64, roots: &[ComplexPoint]) -> Result<Self> {
        Self::new(leading, roots.iter().map(|&r| Factor::new(r, 1)).collect())
    }

    pub fn coefficient(&self) -> Complex64 {
        self.coefficient
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// `n = Σ multᵢ`; `q(z) ~ coefficient · zⁿ` as `z → ∞`.
    pub fn degree_at_infinity(&self) -> i32 {
        self.factors.iter().map(|f| f.mult).sum()
    }

    /// Order of `q dz²` at infinity (negative for a pole): `−(n + 4)`.
    pub fn order_at_infinity(&self) -> i32 {
        -(self.degree_at_infinity() + 4)
    }

    pub fn is_polynomial(&self) -> bool {
        self.factors.iter().all(|f| f.mult > 0)
    }

    /// `−q`, which turns `q dz²` into the differential with swapped
    /// horizontal and vertical foliations' sign convention.
    pub fn negated(&self) -> Self {
        Self { coefficient: -self.coefficient, factors: self.factors.clone() }
    }

    pub fn zeros(&self) -> impl Iterator<Item = &Factor> {
        self.factors.iter().filter(|f| f.mult > 0)
    }

    pub fn poles(&self) -> impl Iterator<Item = &Factor> {
        self.factors.iter().filter(|f| f.mult < 0)
    }

    /// Zeros and simple poles, in factor order.
    pub fn finite_critical_points(&self) -> impl Iterator<Item = &Factor> {
        self.factors.iter().filter(|f| f.mult >= -1)
    }

    /// `max(1, max |rootᵢ|)`, the natural length scale of the configuration.
    pub fn scale(&self) -> f64 {
        self.factors.iter().map(|f| f.root.norm()).fold(1.0, f64::max)
    }

    /// Factor whose root coincides with `z` up to a relative tolerance.
    pub fn factor_at(&self, z: ComplexPoint) -> Option<&Factor> {
        let tol = ROOT_MATCH_TOL * self.scale().max(z.norm());
        self.factors.iter().find(|f| (f.root - z).norm() <= tol)
    }

    /// Distance from `z` to the nearest root of any multiplicity.
    pub fn distance_to_critical(&self, z: ComplexPoint) -> f64 {
        self.factors.iter().map(|f| (f.root - z).norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn evaluate(&self, z: ComplexPoint) -> Result<Complex64> {
        let mut acc = self.coefficient;
        for f in &self.factors {
            let d = z - f.root;
            if d.norm() == 0.0 {
                if f.mult < 0 {
                    return Err(Error::PoleEvaluation(z));
                }
                return Ok(Complex64::new(0.0, 0.0));
            }
            acc *= d.powi(f.mult);
        }
        Ok(acc)
    }

    /// `q'(z)/q(z) = Σ mᵢ/(z − zᵢ)`.
    pub fn log_derivative(&self, z: ComplexPoint) -> Complex64 {
        self.factors.iter().map(|f| f64::from(f.mult) / (z - f.root)).sum()
    }

    /// The root of `q(z)` nearest to `reference`.
    pub fn sqrt_near(&self, z: ComplexPoint, reference: Complex64) -> Result<Complex64> {
        let w = self.evaluate(z)?.sqrt();
        Ok(if (w - reference).norm() <= (w + reference).norm() { w } else { -w })
    }

    pub fn site_order(&self, site: Site) -> i32 {
        match site {
            Site::Infinity => self.order_at_infinity(),
            Site::Finite(p) => self.factor_at(p).map_or(0, |f| f.mult),
        }
    }
}

/// A point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Site {
    Finite(ComplexPoint),
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalClass {
    /// A zero or a simple pole.
    Finite,
    /// A pole of order at least two.
    Infinite,
    Regular,
}

impl CriticalClass {
    pub fn of_order(order: i32) -> Self {
        match order {
            0 => Self::Regular,
            o if o >= -1 => Self::Finite,
            _ => Self::Infinite,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub site: Site,
    pub order: i32,
    pub class: CriticalClass,
}

impl FactoredRational {
    /// Every root plus the point at infinity, classified.
    pub fn critical_points(&self) -> Vec<CriticalPoint> {
        let mut out: Vec<_> = self
            .factors
            .iter()
            .map(|f| CriticalPoint {
                site: Site::Finite(f.root),
                order: f.mult,
                class: CriticalClass::of_order(f.mult),
            })
            .collect();
        let order = self.order_at_infinity();
        out.push(CriticalPoint { site: Site::Infinity, order, class: CriticalClass::of_order(order) });
        out
    }
}

/// A chosen value of `√q` at an anchor point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchState {
    pub anchor: ComplexPoint,
    pub value: Complex64,
}

impl BranchState {
    /// Checked constructor: `value² = q(anchor)` to relative tolerance `1e-10`.
    pub fn new(q: &FactoredRational, anchor: ComplexPoint, value: Complex64) -> Result<Self> {
        let target = q.evaluate(anchor)?;
        if target.norm() == 0.0 {
            return Err(Error::BranchAmbiguity(anchor));
        }
        if (value * value - target).norm() > 1e-10 * target.norm() {
            return Err(Error::InvalidInput(format!(
                "branch value {value} does not square to q({anchor}) = {target}"
            )));
        }
        Ok(Self { anchor, value })
    }

    pub fn principal(q: &FactoredRational, anchor: ComplexPoint) -> Result<Self> {
        let v = q.evaluate(anchor)?.sqrt();
        if v.norm() == 0.0 {
            return Err(Error::BranchAmbiguity(anchor));
        }
        Ok(Self { anchor, value: v })
    }

    /// The root of `q(anchor)` nearest to `hint`.
    pub fn nearest(q: &FactoredRational, anchor: ComplexPoint, hint: Complex64) -> Result<Self> {
        let v = q.sqrt_near(anchor, hint)?;
        if v.norm() == 0.0 {
            return Err(Error::BranchAmbiguity(anchor));
        }
        Ok(Self { anchor, value: v })
    }

    /// Branch fixed by `√q(z) ~ leading_root · z^{n/2}` at infinity, anchored on
    /// the positive real axis at `radius` (which must exceed every root).
    pub fn asymptotic(q: &FactoredRational, leading_root: Complex64, radius: f64) -> Result<Self> {
        if radius <= q.scale() {
            return Err(Error::InvalidInput("anchor radius must exceed every root".into()));
        }
        let n = q.degree_at_infinity();
        let hint = leading_root * radius.powf(f64::from(n) / 2.0);
        Self::nearest(q, Complex64::new(radius, 0.0), hint)
    }
}

/// Carry `√q` from `(from, v_from)` to `to`, bisecting until each elementary
/// step changes the value by less than half its modulus.
pub(crate) fn advance_sqrt(
    q: &FactoredRational,
    from: ComplexPoint,
    v_from: Complex64,
    to: ComplexPoint,
) -> Result<Complex64> {
    advance_rec(q, from, v_from, to, 0)
}

fn advance_rec(
    q: &FactoredRational,
    from: ComplexPoint,
    v_from: Complex64,
    to: ComplexPoint,
    depth: u32,
) -> Result<Complex64> {
    let cand = q.sqrt_near(to, v_from)?;
    let scale = v_from.norm().max(cand.norm());
    if scale > 0.0 && (cand - v_from).norm() <= 0.5 * scale && v_from.norm() > 0.0 {
        return Ok(cand);
    }
    if depth >= MAX_BISECTIONS {
        return Err(Error::BranchAmbiguity(to));
    }
    let mid = (from + to) * 0.5;
    let v_mid = advance_rec(q, from, v_from, mid, depth + 1)?;
    advance_rec(q, mid, v_mid, to, depth + 1)
}

/// Continue `√q` along `path` starting from `start.value` at `path[0]`,
/// choosing at every vertex the root nearest the previous value.
pub fn continue_sqrt(q: &FactoredRational, path: &[ComplexPoint], start: &BranchState) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(path.len());
    let Some((&first, rest)) = path.split_first() else {
        return Ok(out);
    };
    let mut prev = first;
    let mut v = if (start.anchor - first).norm() == 0.0 {
        start.value
    } else {
        advance_sqrt(q, start.anchor, start.value, first)?
    };
    out.push(v);
    for &z in rest {
        v = advance_sqrt(q, prev, v, z)?;
        out.push(v);
        prev = z;
    }
    Ok(out)
}

/// Local behaviour `q(z) ≈ leading · (z − z₀)^order` at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalData {
    pub site: Site,
    pub order: i32,
    pub leading: Complex64,
    /// `lim (z − z₀)² q(z)`; present only for double poles.
    pub residue_sq: Option<Complex64>,
}

pub fn local_data(q: &FactoredRational, site: Site) -> LocalData {
    let (order, leading) = match site {
        // In w = 1/z the differential is q(1/w) w⁻⁴ dw² ≈ c w^{-(n+4)} dw².
        Site::Infinity => (q.order_at_infinity(), q.coefficient),
        Site::Finite(p) => match q.factor_at(p) {
            Some(f) => {
                let mut lead = q.coefficient;
                for g in q.factors.iter().filter(|g| g.root != f.root) {
                    lead *= (f.root - g.root).powi(g.mult);
                }
                (f.mult, lead)
            }
            // A point outside the factor set cannot be a pole, so evaluation succeeds.
            None => (0, q.evaluate(p).unwrap_or_default()),
        },
    };
    LocalData { site, order, leading, residue_sq: (order == -2).then_some(leading) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DoublePoleForm {
    Radial,
    Circular,
    LogSpiral,
}

pub fn classify_double_pole(d: &LocalData) -> Result<DoublePoleForm> {
    let r_sq = match (d.order, d.residue_sq) {
        (-2, Some(r)) => r,
        _ => return Err(Error::NotDoublePole),
    };
    let r = r_sq.sqrt();
    let tol = RESIDUE_ZERO_TOL * r.norm();
    Ok(if r.im.abs() < tol {
        DoublePoleForm::Radial
    } else if r.re.abs() < tol {
        DoublePoleForm::Circular
    } else {
        DoublePoleForm::LogSpiral
    })
}

/// `res_∞ √P = (1/2πi) ∮ √P dz` over a clockwise circle enclosing every root,
/// with the branch `√P ~ √(leading) z^{n/2}` (principal square root of the
/// leading coefficient). Equals minus the `z⁻¹` coefficient of the Laurent
/// expansion at infinity.
pub fn residue_at_infinity_sqrt(p: &FactoredRational) -> Result<Complex64> {
    if !p.is_polynomial() {
        return Err(Error::NotPolynomial);
    }
    let n = p.degree_at_infinity();
    if n % 2 != 0 {
        return Err(Error::OddDegree);
    }
    let radius = 2.0 * p.factors.iter().map(|f| f.root.norm()).fold(0.0, f64::max) + 1.0;
    let start = BranchState::asymptotic(p, p.coefficient.sqrt(), radius)?;

    // Trapezoidal rule on the circle converges geometrically for the
    // single-valued integrand; double until two successive estimates agree.
    let mut nodes = 64usize;
    let mut previous: Option<Complex64> = None;
    loop {
        let path: Vec<ComplexPoint> = (0..=nodes)
            .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / nodes as f64))
            .collect();
        let values = continue_sqrt(p, &path, &start)?;
        let ccw: Complex64 = path[..nodes]
            .iter()
            .zip(&values[..nodes])
            .map(|(&z, &v)| v * Complex64::i() * z)
            .sum::<Complex64>()
            * (2.0 * PI / nodes as f64);
        // clockwise orientation
        let res = -ccw / (2.0 * PI * Complex64::i());
        if let Some(prev) = previous {
            let scale = 1.0 + radius.powi(n / 2 + 1) * p.coefficient.norm().sqrt();
            if (res - prev).norm() <= 1e-10 * scale {
                return Ok(res);
            }
        }
        if nodes >= 1 << 16 {
            return Ok(res);
        }
        previous = Some(res);
        nodes *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quartic() -> FactoredRational {
        FactoredRational::polynomial(c(-1.0, 0.0), &[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)])
            .unwrap()
    }

    fn laguerre3() -> FactoredRational {
        FactoredRational::new(
            c(-1.0, 0.0),
            vec![Factor::new(c(9.0, 0.0), 1), Factor::new(c(1.0, 0.0), 1), Factor::new(c(0.0, 0.0), -2)],
        )
        .unwrap()
    }

    fn circle(center: Complex64, radius: f64, n: usize) -> Vec<Complex64> {
        (0..=n).map(|k| center + Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64)).collect()
    }

    #[test]
    fn evaluates_factored_form() {
        assert!((quartic().evaluate(c(0.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let v = laguerre3().evaluate(c(5.0, 0.0)).unwrap();
        assert!((v - c(16.0 / 25.0, 0.0)).norm() < 1e-14);
        assert_eq!(laguerre3().evaluate(c(0.0, 0.0)), Err(Error::PoleEvaluation(c(0.0, 0.0))));
    }

    #[test]
    fn rejects_repeated_roots_and_zero_coefficient() {
        assert!(FactoredRational::polynomial(c(1.0, 0.0), &[c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(FactoredRational::polynomial(c(0.0, 0.0), &[c(1.0, 0.0)]).is_err());
        assert!(FactoredRational::new(c(1.0, 0.0), vec![Factor::new(c(1.0, 0.0), 0)]).is_err());
    }

    #[test]
    fn monodromy_of_simple_zero_and_pairs() {
        let q = FactoredRational::polynomial(c(1.0, 0.0), &[c(0.0, 0.0)]).unwrap();
        let path = circle(c(0.0, 0.0), 1.0, 16);
        let start = BranchState::principal(&q, path[0]).unwrap();
        let vals = continue_sqrt(&q, &path, &start).unwrap();
        assert!((vals.last().unwrap() + start.value).norm() < 1e-12);

        let q2 = FactoredRational::polynomial(c(1.0, 0.0), &[c(0.3, 0.0), c(-0.2, 0.1)]).unwrap();
        let start = BranchState::principal(&q2, path[0]).unwrap();
        let vals = continue_sqrt(&q2, &path, &start).unwrap();
        assert!((vals.last().unwrap() - start.value).norm() < 1e-12);

        let q4 = quartic();
        let path = circle(c(0.0, 0.0), 10.0, 8);
        let start = BranchState::principal(&q4, path[0]).unwrap();
        let vals = continue_sqrt(&q4, &path, &start).unwrap();
        assert!((vals.last().unwrap() - start.value).norm() < 1e-9 * start.value.norm());
    }

    #[test]
    fn continuation_through_zero_is_ambiguous() {
        let q = FactoredRational::polynomial(c(1.0, 0.0), &[c(0.0, 0.0)]).unwrap();
        let start = BranchState::principal(&q, c(-1.0, 0.0)).unwrap();
        let err = continue_sqrt(&q, &[c(-1.0, 0.0), c(1.0, 0.0)], &start).unwrap_err();
        assert!(matches!(err, Error::BranchAmbiguity(_)));
    }

    #[test]
    fn local_data_examples() {
        let d = local_data(&laguerre3(), Site::Finite(c(0.0, 0.0)));
        assert_eq!(d.order, -2);
        assert!((d.residue_sq.unwrap() - c(-9.0, 0.0)).norm() < 1e-12);

        let d = local_data(&quartic(), Site::Infinity);
        assert_eq!(d.order, -8);
        assert!(d.residue_sq.is_none());

        let d = local_data(&quartic(), Site::Finite(c(1.0, 0.0)));
        assert_eq!(d.order, 1);
        assert!((d.leading - c(-4.0, 0.0)).norm() < 1e-14);

        let d = local_data(&quartic(), Site::Finite(c(0.5, 0.0)));
        assert_eq!(d.order, 0);
    }

    #[test]
    fn order_sum_rule() {
        for q in [quartic(), laguerre3()] {
            let total: i32 = q.critical_points().iter().map(|p| p.order).sum();
            assert_eq!(total, -4);
        }
    }

    #[test]
    fn double_pole_forms() {
        let circ = FactoredRational::new(c(-1.0, 0.0), vec![Factor::new(c(0.0, 0.0), -2)]).unwrap();
        let d = local_data(&circ, Site::Finite(c(0.0, 0.0)));
        assert_eq!(classify_double_pole(&d).unwrap(), DoublePoleForm::Circular);

        let radial = circ.negated();
        let d = local_data(&radial, Site::Finite(c(0.0, 0.0)));
        assert_eq!(classify_double_pole(&d).unwrap(), DoublePoleForm::Radial);

        let cc = c(-0.95, 0.1);
        let spiral = LocalData { site: Site::Infinity, order: -2, leading: -cc * cc, residue_sq: Some(-cc * cc) };
        assert_eq!(classify_double_pole(&spiral).unwrap(), DoublePoleForm::LogSpiral);

        let simple = local_data(&quartic(), Site::Finite(c(1.0, 0.0)));
        assert_eq!(classify_double_pole(&simple), Err(Error::NotDoublePole));
    }

    #[test]
    fn residue_at_infinity_rejects_bad_input() {
        let odd = FactoredRational::polynomial(c(1.0, 0.0), &[c(1.0, 0.0)]).unwrap();
        assert_eq!(residue_at_infinity_sqrt(&odd), Err(Error::OddDegree));
        assert_eq!(residue_at_infinity_sqrt(&laguerre3()), Err(Error::NotPolynomial));
    }

    #[test]
    fn asymptotic_branch_matches_leading_term() {
        let q = quartic().negated(); // z⁴ − 1
        let b = BranchState::asymptotic(&q, c(1.0, 0.0), 50.0).unwrap();
        assert!((b.value - c(2500.0, 0.0)).norm() < 1e-3);
    }
}
