mod canon;
mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use critgraph::algebra::{classify_double_pole, local_data, residue_at_infinity_sqrt, DoublePoleForm};
use critgraph::detector::{find_short_trajectory, ShortTrajectoryReport};
use critgraph::families::{
    jacobi_polynomial_zeros, laguerre_polynomial_zeros, sweep, zero_measure_overlay, FamilyParams, OverlayReport,
};
use critgraph::periods::{
    contour_integral_sqrt, integrate_sqrt, jacobi_quantization, laguerre_quantization, OrientedArc, QuantizationResult,
    Side,
};
use critgraph::polygon::{teichmuller_residual, PolygonData};
use critgraph::{critical_graph, BranchState, Complex64, CriticalGraph, FactoredRational, Site, TraceOptions};
use serde::Serialize;

use render::{render, RenderSpec};

#[derive(Parser)]
#[command(name = "critgraph", version, about = "Critical graphs and short trajectories of rational quadratic differentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace every critical ray of q(z) dz² and write the graph.
    Graph {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        tracing: Tracing,
        #[command(flatten)]
        figure: Figure,
        #[command(flatten)]
        output: Output,
    },
    /// Look for a short trajectory between two zeros (indices among the zeros of the spec).
    Short {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[command(flatten)]
        tracing: Tracing,
        #[command(flatten)]
        output: Output,
    },
    /// Integrate √f along a polyline, or around it with --closed.
    Period {
        #[arg(long)]
        spec: PathBuf,
        /// Vertices as "re,im;re,im;..."
        #[arg(long, allow_hyphen_values = true)]
        arc: String,
        #[arg(long, value_enum, default_value = "off")]
        side: SideArg,
        #[arg(long)]
        closed: bool,
        /// Integrate √(−f) instead.
        #[arg(long)]
        negate: bool,
        /// Take the principal root at this point instead of √c·z^{n/2} at infinity.
        #[arg(long, allow_hyphen_values = true)]
        anchor: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// The Laguerre family −D_C(z)/z² dz².
    Laguerre {
        #[arg(long = "C", allow_hyphen_values = true)]
        c: String,
        #[command(flatten)]
        family: FamilyFlags,
        #[command(flatten)]
        tracing: Tracing,
        #[command(flatten)]
        figure: Figure,
        #[command(flatten)]
        output: Output,
    },
    /// The Jacobi family −D_{A,B}(z)/(z²−1)² dz².
    Jacobi {
        #[arg(long = "A", allow_hyphen_values = true)]
        a: String,
        #[arg(long = "B", allow_hyphen_values = true)]
        b: String,
        #[command(flatten)]
        family: FamilyFlags,
        #[command(flatten)]
        tracing: Tracing,
        #[command(flatten)]
        figure: Figure,
        #[command(flatten)]
        output: Output,
    },
    /// Run the detector along a straight parameter path.
    Sweep {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Start parameter: "C" for Laguerre, "A/B" for Jacobi.
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Leave the connecting trajectories out of the report.
        #[arg(long)]
        brief: bool,
        #[command(flatten)]
        tracing: Tracing,
        #[command(flatten)]
        output: Output,
    },
    /// Consistency checks on polygon data or a polynomial spec.
    Check {
        /// PolygonData JSON file.
        #[arg(long, conflicts_with = "residue")]
        teichmuller: Option<PathBuf>,
        /// Polynomial spec whose √ has its residue at infinity computed.
        #[arg(long)]
        residue: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Plus,
    Minus,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Laguerre,
    Jacobi,
}

#[derive(Args)]
struct Tracing {
    /// Relative tolerance of the integrator.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    hit_radius: Option<f64>,
    #[arg(long)]
    escape_radius: Option<f64>,
}

impl Tracing {
    fn options(&self, q: &FactoredRational) -> TraceOptions {
        let mut o = TraceOptions::for_differential(q);
        if let Some(t) = self.tol {
            o.rel_tol = t;
        }
        if let Some(h) = self.hit_radius {
            o.hit_radius = h;
        }
        if let Some(r) = self.escape_radius {
            o.escape_radius = r;
        }
        o
    }
}

#[derive(Args)]
struct Figure {
    /// SVG output path.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    center: Option<String>,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    height: Option<f64>,
    #[arg(long, default_value_t = 800)]
    pixels: u32,
    /// Draw non-critical trajectories through a fixed grid.
    #[arg(long)]
    background: bool,
    /// Override a stroke style, e.g. short=stroke:red
    #[arg(long, value_name = "CLASS=STYLE")]
    style: Vec<String>,
}

impl Figure {
    fn spec(&self, q: &FactoredRational) -> anyhow::Result<RenderSpec> {
        let mut s = RenderSpec::fit(q);
        if let Some(c) = &self.center {
            s.center = parse_complex(c)?;
        }
        match (self.width, self.height) {
            (Some(w), Some(h)) => (s.width, s.height) = (w, h),
            (Some(w), None) | (None, Some(w)) => (s.width, s.height) = (w, w),
            (None, None) => {}
        }
        s.pixels = self.pixels;
        s.background_field = self.background;
        for kv in &self.style {
            let (k, v) = kv.split_once('=').ok_or_else(|| anyhow!("style must be CLASS=STYLE, got {kv:?}"))?;
            s.styles.insert(k.to_string(), v.to_string());
        }
        s.validate()?;
        Ok(s)
    }
}

#[derive(Args)]
struct Output {
    /// JSON output path; standard output when absent.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyFlags {
    /// Overlay the zeros of the degree-n polynomial of the family.
    #[arg(long, value_name = "N")]
    overlay_zeros: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    tube: f64,
    /// Evaluate the period along the detected trajectory.
    #[arg(long)]
    quantize: bool,
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

trait Code<T> {
    fn code(self, code: u8) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Code<T> for Result<T, E> {
    fn code(self, code: u8) -> Result<T, Failure> {
        self.map_err(|e| Failure { code, error: e.into() })
    }
}

const BAD_INPUT: u8 = 2;
const RUN_FAILURE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Result<u8, Failure> {
    match cmd {
        Command::Graph { spec, tracing, figure, output } => {
            let q = load_spec(&spec)?;
            let opts = tracing.options(&q);
            let fig = figure.spec(&q).code(BAD_INPUT)?;
            let graph = critical_graph(&q, &opts).code(RUN_FAILURE)?;
            if let Some(out) = &figure.out {
                write(out, &render(&q, &graph, None, &[], &fig, &opts))?;
            }
            emit(&output, &graph)?;
            Ok(0)
        }
        Command::Short { spec, from, to, tracing, output } => {
            let q = load_spec(&spec)?;
            let zeros: Vec<Complex64> = q.zeros().map(|f| f.root).collect();
            let pick = |i: usize| {
                zeros.get(i).copied().ok_or_else(|| anyhow!("zero index {i} out of range (spec has {})", zeros.len()))
            };
            let (a, b) = (pick(from).code(BAD_INPUT)?, pick(to).code(BAD_INPUT)?);
            let report = find_short_trajectory(&q, a, b, &tracing.options(&q)).map_err(|e| match e {
                critgraph::Error::ZerosCoincide => Failure { code: BAD_INPUT, error: e.into() },
                _ => Failure { code: RUN_FAILURE, error: e.into() },
            })?;
            emit(&output, &report)?;
            Ok(verdict(&report))
        }
        Command::Period { spec, arc, side, closed, negate, anchor, output } => {
            let f = load_spec(&spec)?;
            let f = if negate { f.negated() } else { f };
            period(&f, &arc, side, closed, anchor.as_deref(), &output)
        }
        Command::Laguerre { c, family, tracing, figure, output } => {
            let c = parse_complex(&c).code(BAD_INPUT)?;
            run_family(FamilyParams::Laguerre { c }, &family, &tracing, &figure, &output)
        }
        Command::Jacobi { a, b, family, tracing, figure, output } => {
            let a = parse_complex(&a).code(BAD_INPUT)?;
            let b = parse_complex(&b).code(BAD_INPUT)?;
            run_family(FamilyParams::Jacobi { a, b }, &family, &tracing, &figure, &output)
        }
        Command::Sweep { family, from, to, samples, brief, tracing, output } => {
            let p0 = parse_family(family, &from).code(BAD_INPUT)?;
            let p1 = parse_family(family, &to).code(BAD_INPUT)?;
            if samples == 0 {
                return Err(Failure { code: BAD_INPUT, error: anyhow!("need at least one sample") });
            }
            let path = p0.path_to(&p1, samples);
            let mut result = sweep(&path, |q| tracing.options(q)).map_err(|e| match e {
                critgraph::Error::DegenerateSample(..) => Failure { code: BAD_INPUT, error: e.into() },
                _ => Failure { code: RUN_FAILURE, error: e.into() },
            })?;
            if brief {
                for s in &mut result.samples {
                    s.report.trajectory = None;
                }
            }
            emit(&output, &result)?;
            Ok(if result.dichotomy_ok { 0 } else { 1 })
        }
        Command::Check { teichmuller, residue, tol, output } => {
            if let Some(path) = teichmuller {
                let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display())).code(BAD_INPUT)?;
                let p: PolygonData = serde_json::from_str(&text).context("parsing polygon data").code(BAD_INPUT)?;
                let residual = teichmuller_residual(&p);
                let holds = residual.abs() <= tol;
                emit(&output, &Teichmuller { residual, holds })?;
                Ok(if holds { 0 } else { 1 })
            } else if let Some(path) = residue {
                let q = load_spec(&path)?;
                let r = residue_at_infinity_sqrt(&q).code(BAD_INPUT)?;
                let vanishes = r.norm() <= tol;
                emit(&output, &Residue { residue: r, vanishes })?;
                Ok(if vanishes { 0 } else { 1 })
            } else {
                Err(Failure { code: BAD_INPUT, error: anyhow!("nothing to check: pass --teichmuller or --residue") })
            }
        }
    }
}

#[derive(Serialize)]
struct Teichmuller {
    residual: f64,
    holds: bool,
}

#[derive(Serialize)]
struct Residue {
    residue: Complex64,
    vanishes: bool,
}

#[derive(Serialize)]
struct PeriodReport {
    value: Complex64,
    real_part: f64,
    /// `|Re| ≤ 1e-6 (1 + |value|)`.
    real_part_vanishes: bool,
    branch: BranchState,
}

#[derive(Serialize)]
struct FamilyReport {
    params: FamilyParams,
    zeros: (Complex64, Complex64),
    double_pole: Option<DoublePoleForm>,
    graph: CriticalGraph,
    short: ShortTrajectoryReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    quantization: Option<QuantizationResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    overlay: Option<OverlayReport>,
}

fn verdict(r: &ShortTrajectoryReport) -> u8 {
    match (r.found, r.resolved) {
        (true, _) => 0,
        (false, true) => 1,
        (false, false) => RUN_FAILURE,
    }
}

fn period(
    f: &FactoredRational,
    arc: &str,
    side: SideArg,
    closed: bool,
    anchor: Option<&str>,
    output: &Output,
) -> Result<u8, Failure> {
    let vertices = parse_points(arc).code(BAD_INPUT)?;
    let side = match side {
        SideArg::Plus => Side::Plus,
        SideArg::Minus => Side::Minus,
        SideArg::Off => Side::Off,
    };
    let arc = OrientedArc::new(vertices, side).code(BAD_INPUT)?;
    let branch = match anchor {
        Some(a) => BranchState::principal(f, parse_complex(a).code(BAD_INPUT)?).code(BAD_INPUT)?,
        None => {
            let extent = arc.vertices.iter().map(|z| z.norm()).fold(f.scale(), f64::max);
            BranchState::asymptotic(f, f.coefficient().sqrt(), 2.0 * extent + 1.0).code(BAD_INPUT)?
        }
    };
    let value = if closed {
        contour_integral_sqrt(f, &arc, Some(&branch))
    } else {
        integrate_sqrt(f, &arc, &branch)
    }
    .code(RUN_FAILURE)?;
    let real_part_vanishes = value.re.abs() <= 1e-6 * (1.0 + value.norm());
    emit(output, &PeriodReport { value, real_part: value.re, real_part_vanishes, branch })?;
    Ok(0)
}

fn run_family(
    params: FamilyParams,
    flags: &FamilyFlags,
    tracing: &Tracing,
    figure: &Figure,
    output: &Output,
) -> Result<u8, Failure> {
    let q = params.qd().code(BAD_INPUT)?;
    let (a, b) = params.zeros();
    if (a - b).norm() < 1e-9 {
        return Err(Failure { code: BAD_INPUT, error: anyhow!("the two zeros coincide") });
    }
    let fig = figure.spec(&q).code(BAD_INPUT)?;
    let opts = tracing.options(&q);
    let double_pole = match params {
        FamilyParams::Laguerre { .. } => Some(Site::Finite(Complex64::new(0.0, 0.0))),
        FamilyParams::Jacobi { .. } => Some(Site::Infinity),
    }
    .and_then(|site| classify_double_pole(&local_data(&q, site)).ok());
    let graph = critical_graph(&q, &opts).code(RUN_FAILURE)?;
    let short = find_short_trajectory(&q, a, b, &opts).code(RUN_FAILURE)?;

    // from b to a, as the periods expect
    let arc = short.trajectory.as_ref().map(|t| {
        let mut v = t.vertices.clone();
        v.reverse();
        v
    });
    let quantization = match (&arc, flags.quantize) {
        (Some(v), true) => {
            let arc = OrientedArc::off(v.clone()).code(RUN_FAILURE)?;
            Some(
                match params {
                    FamilyParams::Laguerre { c } => laguerre_quantization(c, &arc),
                    FamilyParams::Jacobi { a, b } => jacobi_quantization(a, b, &arc),
                }
                .code(RUN_FAILURE)?,
            )
        }
        (None, true) => return Err(Failure { code: RUN_FAILURE, error: anyhow!("no short trajectory to quantize along") }),
        _ => None,
    };

    let mut dots = Vec::new();
    let overlay = match flags.overlay_zeros {
        Some(n) => {
            let zeros = match params {
                FamilyParams::Laguerre { c } if c.im == 0.0 => laguerre_polynomial_zeros(n, c.re),
                FamilyParams::Jacobi { a, b } if a.im == 0.0 && b.im == 0.0 => jacobi_polynomial_zeros(n, a.re, b.re),
                _ => {
                    return Err(Failure { code: BAD_INPUT, error: anyhow!("the zero overlay needs real parameters") });
                }
            }
            .code(BAD_INPUT)?;
            let curve = arc.as_ref().ok_or_else(|| anyhow!("no short trajectory to overlay")).code(RUN_FAILURE)?;
            let report = zero_measure_overlay(&zeros, curve, flags.tube).code(BAD_INPUT)?;
            dots = zeros;
            Some(report)
        }
        None => None,
    };

    if let Some(out) = &figure.out {
        write(out, &render(&q, &graph, short.trajectory.as_ref(), &dots, &fig, &opts))?;
    }
    let code = verdict(&short);
    emit(output, &FamilyReport { params, zeros: (a, b), double_pole, graph, short, quantization, overlay })?;
    Ok(code)
}

fn load_spec(path: &Path) -> Result<FactoredRational, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).code(BAD_INPUT)?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display())).code(BAD_INPUT)
}

fn emit<T: Serialize>(output: &Output, value: &T) -> Result<(), Failure> {
    let text = canon::to_string(value).code(RUN_FAILURE)?;
    match &output.json {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display())).code(RUN_FAILURE)
}

/// `"re"` or `"re,im"`.
fn parse_complex(s: &str) -> anyhow::Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().with_context(|| format!("bad number {p:?} in {s:?}"));
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => bail!("expected \"re\" or \"re,im\", got {s:?}"),
    };
    if !z.is_finite() {
        bail!("{s:?} is not finite");
    }
    Ok(z)
}

fn parse_points(s: &str) -> anyhow::Result<Vec<Complex64>> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(parse_complex).collect()
}

fn parse_family(family: FamilyArg, s: &str) -> anyhow::Result<FamilyParams> {
    Ok(match family {
        FamilyArg::Laguerre => FamilyParams::Laguerre { c: parse_complex(s)? },
        FamilyArg::Jacobi => {
            let (a, b) = s.split_once('/').ok_or_else(|| anyhow!("Jacobi parameters are written \"A/B\", got {s:?}"))?;
            FamilyParams::Jacobi { a: parse_complex(a)?, b: parse_complex(b)? }
        }
    })
}
