use critgraph::detector::{find_short_trajectory, homotopy_signature};
use critgraph::{Complex64, FactoredRational, TraceOptions};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Polynomial differentials: the verdict agrees with the distance band,
    /// and at most one unbroken connection is ever certified.
    #[test]
    fn polynomial_pairs(
        roots in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 3..5),
        lead_arg in 0.0f64..std::f64::consts::TAU,
    ) {
        let roots: Vec<Complex64> = roots.into_iter().map(|(x, y)| c(x, y)).collect();
        let spread = roots.iter().enumerate().all(|(i, a)| roots[..i].iter().all(|b| (a - b).norm() > 0.3));
        prop_assume!(spread);
        let q = FactoredRational::polynomial(Complex64::from_polar(1.0, lead_arg), &roots).unwrap();
        let opts = TraceOptions::for_differential(&q);
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let r = find_short_trajectory(&q, roots[i], roots[j], &opts).unwrap();
                prop_assert_eq!(r.trajectory.is_some(), r.found);
                if r.found {
                    prop_assert!(r.distance <= 2.0 * r.hit_radius);
                    if r.unbroken == Some(true) {
                        prop_assert_eq!(r.connections, 1);
                    }
                    prop_assert!(r.signature.as_ref().unwrap().parities.is_empty());
                } else if r.resolved {
                    prop_assert!(r.distance > 10.0 * r.hit_radius);
                }
            }
        }
    }
}

#[test]
fn signature_examples() {
    let pole = [c(0.0, 0.0)];
    assert!(homotopy_signature(&[c(1.0, 0.0), c(9.0, 0.0)], &[]).unwrap().parities.is_empty());
    let direct = homotopy_signature(&[c(1.0, 0.0), c(9.0, 0.0)], &pole).unwrap();
    // from 1 over the top of 0, down its left side, and back underneath to 9
    let around = homotopy_signature(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0), c(9.0, 0.0)], &pole).unwrap();
    assert_eq!(direct.parities, vec![false]);
    assert_eq!(around.parities, vec![true]);
    // with a second pole far away only the first bit moves
    let two = [c(0.0, 0.0), c(20.0, 5.0)];
    let a = homotopy_signature(&[c(1.0, 0.0), c(9.0, 0.0)], &two).unwrap();
    let b = homotopy_signature(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0), c(9.0, 0.0)], &two).unwrap();
    assert_eq!(a.parities, vec![false, false]);
    assert_eq!(b.parities, vec![true, false]);
}

#[test]
fn bad_zero_arguments() {
    let q = critgraph::families::laguerre_qd(c(3.0, 0.0)).unwrap();
    let opts = TraceOptions::for_differential(&q);
    assert!(matches!(find_short_trajectory(&q, c(0.0, 0.0), c(1.0, 0.0), &opts), Err(critgraph::Error::NotAZero(_))));
    assert!(matches!(find_short_trajectory(&q, c(1.0, 0.0), c(1.0, 0.0), &opts), Err(critgraph::Error::ZerosCoincide)));
    assert!(matches!(critgraph::detector::gamma_set(&q, c(0.0, 0.0), &opts), Err(critgraph::Error::NotAZero(_))));
    let rays = critgraph::detector::gamma_set(&q, c(1.0, 0.0), &opts).unwrap();
    assert_eq!(rays.len(), 3);
    assert_eq!(rays.iter().filter(|t| t.hit_point() == Some(c(9.0, 0.0))).count(), 1);
}
