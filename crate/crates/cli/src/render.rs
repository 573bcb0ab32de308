//! SVG figures of critical graphs.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write;

use critgraph::{trace, Complex64, CriticalGraph, FactoredRational, Termination, TraceKind, TraceOptions, Trajectory};

const GRID: usize = 9;

#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub center: Complex64,
    pub width: f64,
    pub height: f64,
    /// Horizontal resolution in pixels.
    pub pixels: u32,
    pub styles: BTreeMap<String, String>,
    pub background_field: bool,
}

impl RenderSpec {
    /// A square viewport around the finite critical points.
    pub fn fit(q: &FactoredRational) -> Self {
        let pts: Vec<Complex64> = q.factors().iter().map(|f| f.root).collect();
        let (mut lo, mut hi) = (Complex64::new(-1.0, -1.0), Complex64::new(1.0, 1.0));
        if let Some(p) = pts.first() {
            lo = *p;
            hi = *p;
        }
        for p in &pts {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        let size = (hi.re - lo.re).max(hi.im - lo.im) * 1.6 + 2.0;
        Self {
            center: (lo + hi) * 0.5,
            width: size,
            height: size,
            pixels: 800,
            styles: default_styles(),
            background_field: false,
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if !(self.width > 0.0 && self.height > 0.0 && self.width.is_finite() && self.height.is_finite()) {
            anyhow::bail!("viewport dimensions must be positive");
        }
        if self.pixels == 0 {
            anyhow::bail!("resolution must be positive");
        }
        Ok(())
    }
}

pub fn default_styles() -> BTreeMap<String, String> {
    [
        ("short", "stroke:#c0392b;stroke-width:2.5"),
        ("escaped", "stroke:#1f3a5f;stroke-width:1.2"),
        ("pole", "stroke:#2471a3;stroke-width:1.2"),
        ("loop", "stroke:#7d3c98;stroke-width:1.5"),
        ("budget", "stroke:#7f8c8d;stroke-width:1;stroke-dasharray:4 3"),
        ("background", "stroke:#b3b6b7;stroke-width:0.6"),
        ("highlight", "stroke:#e67e22;stroke-width:3.5"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

fn class_of(t: &Trajectory) -> &'static str {
    match t.termination {
        Termination::HitCriticalPoint { .. } => "short",
        Termination::EscapedToInfinity { .. } => "escaped",
        Termination::DivergedToPole { .. } => "pole",
        Termination::ClosedLoop => "loop",
        _ => "budget",
    }
}

struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
    w: u32,
    h: u32,
}

impl Frame {
    fn new(spec: &RenderSpec) -> Self {
        let scale = f64::from(spec.pixels) / spec.width;
        let h = (spec.height * scale).round().max(1.0) as u32;
        Self {
            x0: spec.center.re - spec.width / 2.0,
            y1: spec.center.im + spec.height / 2.0,
            scale,
            w: spec.pixels,
            h,
        }
    }

    fn px(&self, z: Complex64) -> (f64, f64) {
        ((z.re - self.x0) * self.scale, (self.y1 - z.im) * self.scale)
    }

    /// Pixel polyline with points closer than half a pixel merged; points
    /// far outside the frame are clamped so coordinates stay short.
    fn polyline(&self, pts: &[Complex64]) -> String {
        let mut out = String::new();
        let mut last: Option<(f64, f64)> = None;
        let lim = 4.0 * f64::from(self.w.max(self.h));
        for (i, z) in pts.iter().enumerate() {
            let (x, y) = self.px(*z);
            let (x, y) = (x.clamp(-lim, lim), y.clamp(-lim, lim));
            let keep = i + 1 == pts.len() || last.is_none_or(|(a, b)| (x - a).hypot(y - b) >= 0.5);
            if keep {
                if !out.is_empty() {
                    out.push(' ');
                }
                let _ = write!(out, "{x:.2},{y:.2}");
                last = Some((x, y));
            }
        }
        out
    }
}

/// Horizontal trajectories through a fixed grid of regular points.
fn background(q: &FactoredRational, spec: &RenderSpec, opts: &TraceOptions) -> Vec<Trajectory> {
    let reach = spec.width.hypot(spec.height);
    let mut local = *opts;
    local.max_steps = local.max_steps.min(4000);
    local.escape_radius = local.escape_radius.min(spec.center.norm() + reach);
    let mut out = Vec::new();
    for i in 0..GRID {
        for j in 0..GRID {
            let z = spec.center
                + Complex64::new(
                    spec.width * ((i as f64 + 0.5) / GRID as f64 - 0.5),
                    spec.height * ((j as f64 + 0.5) / GRID as f64 - 0.5),
                );
            if q.distance_to_critical(z) < 0.02 * spec.width {
                continue;
            }
            for dir in [0.0, PI] {
                if let Ok(t) = trace(q, z, dir, &local, TraceKind::Horizontal) {
                    out.push(t);
                }
            }
        }
    }
    out
}

pub fn render(
    q: &FactoredRational,
    graph: &CriticalGraph,
    highlight: Option<&Trajectory>,
    dots: &[Complex64],
    spec: &RenderSpec,
    opts: &TraceOptions,
) -> String {
    let f = Frame::new(spec);
    let style = |k: &str| spec.styles.get(k).cloned().unwrap_or_default();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = f.w,
        h = f.h
    );
    let _ = writeln!(s, r#"<defs><clipPath id="view"><rect width="{}" height="{}"/></clipPath></defs>"#, f.w, f.h);
    let _ = writeln!(s, r#"<rect width="{}" height="{}" fill="white"/>"#, f.w, f.h);
    let _ = writeln!(s, r#"<g clip-path="url(#view)" fill="none" stroke-linejoin="round">"#);
    if spec.background_field {
        let _ = writeln!(s, r#"<g class="background" style="{}">"#, style("background"));
        for t in background(q, spec, opts) {
            let _ = writeln!(s, r#"<polyline points="{}"/>"#, f.polyline(&t.vertices));
        }
        let _ = writeln!(s, "</g>");
    }
    for ray in &graph.rays {
        let class = class_of(&ray.trajectory);
        let _ = writeln!(
            s,
            r#"<polyline class="{class}" data-source="{}" data-index="{}" style="{}" points="{}"/>"#,
            ray.source,
            ray.index,
            style(class),
            f.polyline(&ray.trajectory.vertices)
        );
    }
    if let Some(t) = highlight {
        let _ = writeln!(s, r#"<polyline class="highlight" style="{}" points="{}"/>"#, style("highlight"), f.polyline(&t.vertices));
    }
    let _ = writeln!(s, "</g>");
    for z in dots {
        let (x, y) = f.px(*z);
        let _ = writeln!(s, r##"<circle class="zero-dot" cx="{x:.2}" cy="{y:.2}" r="2" fill="#16a085"/>"##);
    }
    for factor in q.factors() {
        let (x, y) = f.px(factor.root);
        if factor.mult > 0 {
            let _ = writeln!(s, r#"<circle class="zero" cx="{x:.2}" cy="{y:.2}" r="4" fill="black"/>"#);
        } else {
            let _ = writeln!(
                s,
                r#"<circle class="pole" cx="{x:.2}" cy="{y:.2}" r="5" fill="white" stroke="black" stroke-width="1.5"/>"#
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
