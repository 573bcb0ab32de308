use std::f64::consts::TAU;

use critgraph::algebra::{classify_double_pole, continue_sqrt, local_data, DoublePoleForm, LocalData, Site};
use critgraph::detector::homotopy_signature;
use critgraph::families::{jacobi_zeros, laguerre_zeros};
use critgraph::geometry::densify;
use critgraph::periods::{contour_integral_sqrt, integrate_sqrt_avoiding, OrientedArc, Side};
use critgraph::polygon::{teichmuller_residual, PolygonData, PolygonVertex};
use critgraph::tracer::emanation_directions;
use critgraph::{trace, BranchState, Complex64, Factor, FactoredRational, Termination, TraceKind, TraceOptions};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn point(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(x, y)| c(x, y))
}

/// Roots at least `gap` apart.
fn spread(roots: &[Complex64], gap: f64) -> bool {
    roots.iter().enumerate().all(|(i, a)| roots[..i].iter().all(|b| (a - b).norm() >= gap))
}

/// Cumulative `∫ √q dz` along a traced polyline, 5-point Gauss per chord,
/// with the branch pinned to the stored vertex values.
fn periods_along(q: &FactoredRational, vertices: &[Complex64], roots: &[Complex64]) -> Vec<Complex64> {
    let gauss = [
        (-0.906_179_845_938_664, 0.236_926_885_056_189),
        (-0.538_469_310_105_683, 0.478_628_670_499_366),
        (0.0, 0.568_888_888_888_889),
        (0.538_469_310_105_683, 0.478_628_670_499_366),
        (0.906_179_845_938_664, 0.236_926_885_056_189),
    ];
    let mut acc = c(0.0, 0.0);
    let mut out = vec![acc];
    let mut reference: Option<Complex64> = None;
    for w in vertices.windows(2) {
        let (z0, z1) = (w[0], w[1]);
        let mid = (z0 + z1) * 0.5;
        let half = (z1 - z0) * 0.5;
        let mut seg = c(0.0, 0.0);
        for &(x, wt) in &gauss {
            let z = mid + half * x;
            let v = q.evaluate(z).unwrap().sqrt();
            // orient each value along the chord; the trace moves with Re √q dz > 0
            let v = match reference {
                Some(r) if (v - r).norm() > (v + r).norm() => -v,
                None if (v * half).re < 0.0 => -v,
                _ => v,
            };
            reference = Some(v);
            seg += v * wt;
        }
        acc += seg * half;
        out.push(acc);
        if roots.iter().any(|r| (r - z1).norm() == 0.0) {
            reference = None;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn monodromy_parity(
        roots in prop::collection::vec((point(2.0), prop_oneof![Just(1), Just(-1), Just(2), Just(-2)]), 1..5),
        center in point(2.0),
        radius in 0.3f64..3.0,
    ) {
        let rs: Vec<_> = roots.iter().map(|r| r.0).collect();
        prop_assume!(spread(&rs, 0.1));
        prop_assume!(rs.iter().all(|r| ((r - center).norm() - radius).abs() > 0.05));
        let q = FactoredRational::new(c(1.3, -0.4), roots.iter().map(|&(r, m)| Factor::new(r, m)).collect()).unwrap();
        let loop_: Vec<Complex64> = (0..=512).map(|k| center + Complex64::from_polar(radius, TAU * k as f64 / 512.0)).collect();
        let start = BranchState::principal(&q, loop_[0]).unwrap();
        let values = continue_sqrt(&q, &loop_, &start).unwrap();
        for (z, v) in loop_.iter().zip(&values) {
            let target = q.evaluate(*z).unwrap();
            prop_assert!((v * v - target).norm() <= 1e-9 * target.norm());
        }
        let enclosed: i32 = roots.iter().filter(|(r, _)| (r - center).norm() < radius).map(|(_, m)| m).sum();
        let expected = if enclosed % 2 == 0 { start.value } else { -start.value };
        prop_assert!((values[512] - expected).norm() <= 1e-9 * expected.norm());
    }

    #[test]
    fn emanation_count_and_spacing(order in -1i32..6, lead in point(3.0)) {
        prop_assume!(lead.norm() > 1e-3);
        let d = LocalData { site: Site::Finite(c(0.0, 0.0)), order, leading: lead, residue_sq: None };
        let m = (order + 2) as usize;
        let h = emanation_directions(&d, TraceKind::Horizontal).unwrap();
        let v = emanation_directions(&d, TraceKind::Vertical).unwrap();
        prop_assert_eq!(h.len(), m);
        prop_assert_eq!(v.len(), m);
        for k in 0..m {
            let gap = if k + 1 < m { h[k + 1] - h[k] } else { h[0] + TAU - h[k] };
            prop_assert!((gap - TAU / m as f64).abs() < 1e-9);
            // a·e^{i(r+2)θ} is positive along horizontal directions, negative along vertical ones
            let hz = lead * Complex64::from_polar(1.0, m as f64 * h[k]);
            let vz = lead * Complex64::from_polar(1.0, m as f64 * v[k]);
            prop_assert!(hz.im.abs() < 1e-9 * hz.norm() && hz.re > 0.0);
            prop_assert!(vz.im.abs() < 1e-9 * vz.norm() && vz.re < 0.0);
        }
    }

    #[test]
    fn order_sum_rule(roots in prop::collection::vec((point(3.0), -3i32..4), 0..6)) {
        let factors: Vec<_> = roots.iter().filter(|r| r.1 != 0).map(|&(r, m)| Factor::new(r, m)).collect();
        let rs: Vec<_> = factors.iter().map(|f| f.root).collect();
        prop_assume!(spread(&rs, 1e-6));
        let q = FactoredRational::new(c(-2.0, 0.5), factors).unwrap();
        let total: i32 = q.critical_points().iter().map(|p| p.order).sum();
        prop_assert_eq!(total, -4);
    }

    #[test]
    fn double_pole_class_is_sign_free(r in point(3.0), axis in 0usize..3) {
        prop_assume!(r.norm() > 1e-3);
        let r = match axis {
            0 => c(r.re, 0.0),
            1 => c(0.0, r.im),
            _ => r,
        };
        prop_assume!(r.re.abs() > 1e-6 || r.im.abs() > 1e-6);
        let class = |root: Complex64| {
            let d = LocalData { site: Site::Finite(c(0.0, 0.0)), order: -2, leading: root * root, residue_sq: Some(root * root) };
            classify_double_pole(&d).unwrap()
        };
        prop_assert_eq!(class(r), class(-r));
        let expected = if r.im == 0.0 {
            DoublePoleForm::Radial
        } else if r.re == 0.0 {
            DoublePoleForm::Circular
        } else if r.re.abs() > 1e-6 && r.im.abs() > 1e-6 {
            DoublePoleForm::LogSpiral
        } else {
            class(r)
        };
        prop_assert_eq!(class(r), expected);
    }

    #[test]
    fn laguerre_and_jacobi_zeros_solve_d(cc in point(5.0), a in point(5.0), b in point(5.0)) {
        let (za, zb) = laguerre_zeros(cc);
        let d = |z: Complex64| z * z - (cc + 2.0) * z * 2.0 + cc * cc;
        let tol = 1e-10 * (1.0 + cc.norm_sqr());
        prop_assert!(d(za).norm() <= tol && d(zb).norm() <= tol);

        let (ja, jb) = jacobi_zeros(a, b);
        let s = a + b + 2.0;
        let dj = |z: Complex64| s * s * z * z + (a * a - b * b) * z * 2.0 + (a - b) * (a - b) - (a + b + 1.0) * 4.0;
        let tol = 1e-10 * (1.0 + a.norm_sqr() + b.norm_sqr());
        prop_assume!(s.norm() > 0.1);
        prop_assert!(dj(ja).norm() <= tol * (1.0 + ja.norm_sqr()));
        prop_assert!(dj(jb).norm() <= tol * (1.0 + jb.norm_sqr()));
    }

    #[test]
    fn jacobi_swap_symmetry(a in point(5.0), b in point(5.0)) {
        let (za, zb) = jacobi_zeros(a, b);
        let (wa, wb) = jacobi_zeros(b, a);
        let tol = 1e-12 * (1.0 + za.norm() + zb.norm());
        prop_assert!((za + wb).norm() <= tol);
        prop_assert!((zb + wa).norm() <= tol);
    }

    #[test]
    fn teichmuller_cyclic(
        verts in prop::collection::vec((-1i32..4, 0.0f64..TAU), 1..7),
        interior in prop::collection::vec(-3i32..3, 0..4),
        shift in 0usize..7,
    ) {
        let vs: Vec<_> = verts.iter().map(|&(order, angle)| PolygonVertex { order, angle }).collect();
        let p = PolygonData::new(vs.clone(), interior.clone()).unwrap();
        let mut rotated = vs;
        let k = shift % rotated.len();
        rotated.rotate_left(k);
        let r = PolygonData::new(rotated, interior).unwrap();
        prop_assert!((teichmuller_residual(&p) - teichmuller_residual(&r)).abs() < 1e-12);
    }

    #[test]
    fn signature_survives_refinement(
        arc in prop::collection::vec(point(3.0), 2..8),
        poles in prop::collection::vec(point(3.0), 0..4),
        step in 0.01f64..0.5,
    ) {
        let sig = homotopy_signature(&arc, &poles);
        prop_assume!(sig.is_ok());
        prop_assert_eq!(sig, homotopy_signature(&densify(&arc, step), &poles));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn side_values_are_opposite(a in point(1.0), b in point(1.0), e in point(1.0), f in point(1.0)) {
        // cut [a, b] on the left, a second cut [e, f] on the right
        let (a, b) = (a + c(-2.0, 0.0), b + c(-2.0, 0.0));
        let (e, f) = (e + c(2.0, 0.0), f + c(2.0, 0.0));
        prop_assume!((a - b).norm() > 0.3 && (e - f).norm() > 0.3);
        let q = FactoredRational::polynomial(c(1.0, 0.0), &[a, b, e, f]).unwrap();
        let start = BranchState::asymptotic(&q, c(1.0, 0.0), 10.0).unwrap();
        let cut = vec![vec![e, f]];
        let plus = integrate_sqrt_avoiding(&q, &OrientedArc::new(vec![a, b], Side::Plus).unwrap(), &start, &cut).unwrap();
        let minus = integrate_sqrt_avoiding(&q, &OrientedArc::new(vec![a, b], Side::Minus).unwrap(), &start, &cut).unwrap();
        prop_assert!((plus + minus).norm() <= 1e-8 * plus.norm().max(1.0));
    }

    #[test]
    fn contour_deformation_invariance(
        roots in prop::collection::vec(point(1.5), 2..7),
        jitter in prop::collection::vec(-0.8f64..0.8, 48),
        inner in prop::collection::vec(point(0.3), 0..1),
    ) {
        prop_assume!(roots.len() % 2 == 0 && spread(&roots, 0.05));
        let q = FactoredRational::polynomial(c(0.7, 0.2), &roots).unwrap();
        let circle: Vec<Complex64> = (0..96).map(|k| Complex64::from_polar(4.0, TAU * k as f64 / 96.0)).collect();
        let wobbly: Vec<Complex64> = (0..48)
            .map(|k| Complex64::from_polar(4.0 + jitter[k], TAU * k as f64 / 48.0) + inner.first().copied().unwrap_or_default())
            .collect();
        let start = BranchState::asymptotic(&q, c(0.7, 0.2).sqrt(), 4.0).unwrap();
        let i1 = contour_integral_sqrt(&q, &OrientedArc::off(circle).unwrap(), Some(&start)).unwrap();
        let i2 = contour_integral_sqrt(&q, &OrientedArc::off(wobbly).unwrap(), Some(&start)).unwrap();
        prop_assert!((i1 - i2).norm() <= 1e-8 * (1.0 + i1.norm()));
    }

    #[test]
    fn horizontal_traces_keep_im_constant(
        roots in prop::collection::vec(point(2.0), 2..4),
        lead_arg in 0.0f64..TAU,
        pick in 0usize..3,
    ) {
        prop_assume!(spread(&roots, 0.3));
        let q = FactoredRational::polynomial(Complex64::from_polar(1.0, lead_arg), &roots).unwrap();
        let opts = TraceOptions::for_differential(&q);
        let z0 = roots[pick % roots.len()];
        let d = local_data(&q, Site::Finite(z0));
        for theta in emanation_directions(&d, TraceKind::Horizontal).unwrap() {
            let t = trace(&q, z0, theta, &opts, TraceKind::Horizontal).unwrap();
            prop_assert!(t.termination != Termination::Budget);
            let p = periods_along(&q, &t.vertices, &roots);
            let dev = p.iter().map(|v| (v.im - p[0].im).abs()).fold(0.0, f64::max);
            prop_assert!(dev <= 1e-6 * (1.0 + t.phi_length), "Im drift {dev}");
            // Re ∫ √q dz never decreases
            prop_assert!(p.windows(2).all(|w| w[1].re - w[0].re >= -1e-9 * (1.0 + t.phi_length)));
        }
    }

    #[test]
    fn polynomial_escapes_follow_critical_directions(
        roots in prop::collection::vec(point(2.0), 1..4),
        lead_arg in 0.0f64..TAU,
    ) {
        prop_assume!(spread(&roots, 0.3));
        let q = FactoredRational::polynomial(Complex64::from_polar(1.0, lead_arg), &roots).unwrap();
        let opts = TraceOptions::for_differential(&q);
        let dirs = critgraph::tracer::asymptotic_directions(&q).unwrap();
        let center = roots.iter().sum::<Complex64>() / roots.len() as f64;
        let g = critgraph::critical_graph(&q, &opts).unwrap();
        for ray in &g.rays {
            if let Termination::EscapedToInfinity { direction_index: Some(k) } = ray.trajectory.termination {
                for z in ray.trajectory.vertices.iter().filter(|z| z.norm() > 0.8 * opts.escape_radius) {
                    let angle = (z - center).arg();
                    let d = (angle - dirs[k]).rem_euclid(TAU);
                    prop_assert!(d.min(TAU - d) < 0.05, "angle {} vs {}", angle, dirs[k]);
                }
            }
        }
    }
}

#[test]
fn laguerre_zeros_are_ordered_on_the_positive_axis() {
    for k in 0..50 {
        let cc = -0.99 + 12.0 * k as f64 / 49.0;
        if cc.abs() < 1e-9 {
            continue;
        }
        let (a, b) = laguerre_zeros(c(cc, 0.0));
        assert!(a.im == 0.0 && b.im == 0.0);
        assert!(0.0 < b.re && b.re < a.re, "C = {cc}: b = {b}, a = {a}");
    }
}
