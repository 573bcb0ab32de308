//! Gauss–Legendre panels on `[0, 1]`.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Points per panel.
pub(crate) const PANEL_ORDER: usize = 16;

/// Nodes and weights of the `PANEL_ORDER`-point rule mapped to `[0, 1]`.
pub(crate) fn unit_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

/// Newton iteration on `P_n` from the Chebyshev-like initial guesses.
pub(crate) fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `u ↦ u²(3 − 2u)`: flattens both ends so square-root type endpoint
/// singularities become analytic in `u`.
pub(crate) fn smoothstep(u: f64) -> (f64, f64) {
    (u * u * (3.0 - 2.0 * u), 6.0 * u * (1.0 - u))
}

/// Sorted nodes `(t, w)` on `[0, 1]` for `panels` equal panels, after the
/// smoothstep substitution (`w` already includes the Jacobian).
pub(crate) fn graded_nodes(panels: usize) -> Vec<(f64, f64)> {
    let rule = unit_rule();
    let h = 1.0 / panels as f64;
    let mut out = Vec::with_capacity(panels * rule.len());
    for p in 0..panels {
        for &(x, w) in rule {
            let u = (p as f64 + x) * h;
            let (t, dt) = smoothstep(u);
            out.push((t, w * h * dt));
        }
    }
    out
}
