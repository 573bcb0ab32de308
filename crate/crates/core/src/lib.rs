//! Critical graphs of rational quadratic differentials `q(z) dz²`.
//!
//! The differential is given in factored form ([`FactoredRational`]). The
//! tracer follows horizontal and vertical trajectories, the detector looks
//! for short trajectories joining two zeros, and the period module evaluates
//! integrals of `√q` along arcs and cycles.

pub mod algebra;
pub mod detector;
pub mod error;
pub mod families;
pub mod geometry;
mod ode;
pub mod periods;
pub mod polygon;
mod quadrature;
pub mod tracer;

pub use num_complex::Complex64;

pub type ComplexPoint = Complex64;

pub use algebra::{BranchState, CriticalPoint, Factor, FactoredRational, Site};
pub use error::{Error, Result};
pub use tracer::{critical_graph, trace, CriticalGraph, Termination, TraceKind, TraceOptions, Trajectory};
