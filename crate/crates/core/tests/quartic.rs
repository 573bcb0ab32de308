//! The quartic `q = −(z⁴ − 1)`: a segment joins ±1, nothing joins ±i,
//! although the real-part condition holds on arcs between ±i.

use std::f64::consts::{FRAC_PI_3, PI, TAU};

use critgraph::algebra::residue_at_infinity_sqrt;
use critgraph::detector::{find_short_trajectory, gamma_set, min_distance, orthogonal_obstruction};
use critgraph::geometry::hausdorff;
use critgraph::periods::{condition_check, contour_integral_sqrt_avoiding, integrate_sqrt_avoiding, OrientedArc, Side};
use critgraph::polygon::measure_interior_angle;
use critgraph::{critical_graph, trace, BranchState, Complex64, Error, FactoredRational, Termination, TraceKind, TraceOptions};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn quartic() -> FactoredRational {
    FactoredRational::polynomial(c(-1.0, 0.0), &[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]).unwrap()
}

#[test]
fn graph_has_the_real_segment_only() {
    let q = quartic();
    let opts = TraceOptions::for_differential(&q);
    let g = critical_graph(&q, &opts).unwrap();
    assert_eq!(g.rays.len(), 12);
    assert!(g.connects(c(-1.0, 0.0), c(1.0, 0.0)));
    assert!(!g.connects(c(0.0, 1.0), c(0.0, -1.0)));
    let escaped = g.rays.iter().filter(|r| matches!(r.trajectory.termination, Termination::EscapedToInfinity { .. })).count();
    // two rays make up the segment, the rest leave along the six critical directions
    assert_eq!(escaped, 10);
    let seg = &g.rays[g.adjacency[0].rays[0]].trajectory;
    assert!(hausdorff(&seg.vertices, &[c(-1.0, 0.0), c(1.0, 0.0)], 1e-3) < 1e-3);
}

#[test]
fn detector_on_both_pairs() {
    let q = quartic();
    let opts = TraceOptions::for_differential(&q);
    let r = find_short_trajectory(&q, c(-1.0, 0.0), c(1.0, 0.0), &opts).unwrap();
    assert!(r.found && r.unbroken == Some(true) && r.distance <= 2.0 * r.hit_radius);
    assert_eq!(r.signature.unwrap().parities, Vec::<bool>::new());

    let r = find_short_trajectory(&q, c(0.0, 1.0), c(0.0, -1.0), &opts).unwrap();
    assert!(!r.found && r.resolved && r.trajectory.is_none());
    // regression constant: the upper and lower ray sets are about 1.5535 apart
    assert!((r.distance - 1.5535).abs() < 1e-3, "{}", r.distance);

    let up = gamma_set(&q, c(0.0, 1.0), &opts).unwrap();
    assert_eq!(min_distance(&up, &up), 0.0);
    assert!(matches!(orthogonal_obstruction(&q, c(0.0, 1.0), c(0.0, -1.0), &opts), Err(Error::NoNearbyRay)));
}

#[test]
fn real_part_condition_is_not_sufficient() {
    let f = quartic().negated();
    for arc in [
        vec![c(0.0, 1.0), c(2.0, 0.0), c(0.0, -1.0)],
        vec![c(0.0, 1.0), c(1.0, 1.0), c(1.5, 0.0), c(1.0, -1.0), c(0.0, -1.0)],
    ] {
        let check = condition_check(&f, &OrientedArc::off(arc).unwrap()).unwrap();
        assert!(check.passes && check.real_part.abs() < 1e-6);
    }
    // the arc through the gap between the zeros 1 and i is in another class
    let inner = OrientedArc::off(vec![c(0.0, 1.0), c(0.5, 0.0), c(0.0, -1.0)]).unwrap();
    assert!(!condition_check(&f, &inner).unwrap().passes);
}

#[test]
fn residue_and_two_i_identity() {
    let f = quartic().negated();
    assert!(residue_at_infinity_sqrt(&f).unwrap().norm() < 1e-8);

    // cuts [−1, 1] and γ = i → 2 → −i; the branch is fixed at infinity
    let seg = vec![c(-1.0, 0.0), c(1.0, 0.0)];
    let gamma = vec![c(0.0, 1.0), c(2.0, 0.0), c(0.0, -1.0)];
    let start = BranchState::asymptotic(&f, c(1.0, 0.0), 5.0).unwrap();
    let cuts = vec![seg.clone(), gamma.clone()];
    let on_seg = integrate_sqrt_avoiding(&f, &OrientedArc::new(seg, Side::Plus).unwrap(), &start, &cuts[1..]).unwrap();
    let on_gamma = integrate_sqrt_avoiding(&f, &OrientedArc::new(gamma, Side::Plus).unwrap(), &start, &cuts[..1]).unwrap();
    let two_i = (on_seg + on_gamma) * 2.0;

    // thin clockwise contours around each cut
    let around_seg = vec![c(-1.1, 0.0), c(-1.0, 0.1), c(1.0, 0.1), c(1.1, 0.0), c(1.0, -0.1), c(-1.0, -0.1)];
    let around_gamma = vec![c(0.0, 1.1), c(2.1, 0.0), c(0.0, -1.1), c(-0.1, -1.0), c(1.9, 0.0), c(-0.1, 1.0)];
    let ring_seg = contour_integral_sqrt_avoiding(&f, &OrientedArc::off(around_seg).unwrap(), Some(&start), &cuts).unwrap();
    let ring_gamma = contour_integral_sqrt_avoiding(&f, &OrientedArc::off(around_gamma).unwrap(), Some(&start), &cuts).unwrap();
    assert!((two_i - (ring_seg + ring_gamma)).norm() < 1e-7, "{two_i} vs {}", ring_seg + ring_gamma);
    // and the sum is iπ·res_∞ = 0
    assert!(two_i.norm() < 1e-7);
    assert!(on_seg.re.abs() < 1e-9);
}

#[test]
fn retrace_reproduces_the_segment() {
    let q = quartic();
    let opts = TraceOptions::for_differential(&q);
    let forward = trace(&q, c(1.0, 0.0), PI, &opts, TraceKind::Horizontal).unwrap();
    let back = trace(&q, c(-1.0, 0.0), 0.0, &opts, TraceKind::Horizontal).unwrap();
    assert_eq!(back.hit_point(), Some(c(1.0, 0.0)));
    assert!(hausdorff(&forward.vertices, &back.vertices, 1e-3) < 10.0 * opts.hit_radius);
    assert!((forward.phi_length - back.phi_length).abs() < 1e-6);
}

#[test]
fn corner_between_escaping_rays() {
    let q = quartic();
    let opts = TraceOptions::for_differential(&q);
    let up = trace(&q, c(1.0, 0.0), FRAC_PI_3, &opts, TraceKind::Horizontal).unwrap();
    let down = trace(&q, c(1.0, 0.0), 5.0 * FRAC_PI_3, &opts, TraceKind::Horizontal).unwrap();
    let m = measure_interior_angle(&q, c(1.0, 0.0), &down, &up, c(2.0, 0.0)).unwrap();
    assert_eq!(m.order, 1);
    assert!((m.value() - TAU / 3.0).abs() < 1e-12);
    assert!((m.raw - TAU / 3.0).abs() < 0.05);
}
