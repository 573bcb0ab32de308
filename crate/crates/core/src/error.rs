use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("evaluation at a pole ({0})")]
    PoleEvaluation(Complex64),
    #[error("square-root continuation is ambiguous near {0}")]
    BranchAmbiguity(Complex64),
    #[error("local data does not describe a double pole")]
    NotDoublePole,
    #[error("polynomial has odd degree; its square root is branched at infinity")]
    OddDegree,
    #[error("expected a polynomial (all multiplicities positive)")]
    NotPolynomial,
    #[error("point of order {0} is an infinite critical point")]
    InfiniteCriticalPoint(i32),
    #[error("infinity is a pole of order {0}; critical directions need order at least 3")]
    NotHigherOrderPole(i32),
    #[error("trajectory cannot start at an infinite critical point ({0})")]
    StartsAtInfiniteCriticalPoint(Complex64),
    #[error("direction {0} is not an emanation direction at the critical point")]
    NotAnEmanationDirection(f64),
    #[error("path passes through a pole")]
    PoleOnPath,
    #[error("{0} is not a finite zero of the quadratic differential")]
    NotAZero(Complex64),
    #[error("the two zeros coincide")]
    ZerosCoincide,
    #[error("arc passes through a pole")]
    ArcThroughPole,
    #[error("no ray from the first zero comes near the second")]
    NoNearbyRay,
    #[error("contour encloses odd total multiplicity; the square root does not close")]
    BranchNotClosed,
    #[error("no admissible route to carry the branch onto the path")]
    BranchRouteBlocked,
    #[error("one-sided boundary value did not stabilise")]
    SideLimitUnstable,
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),
    #[error("parameter condition violated: {0}")]
    ConditionABViolated(String),
    #[error("a zero collides with a pole at {0}")]
    ZeroPoleCollision(Complex64),
    #[error("sample {0} of the sweep is degenerate: {1}")]
    DegenerateSample(usize, String),
    #[error("degree {0} exceeds the supported maximum of {1}")]
    DegreeTooLarge(usize, usize),
    #[error("root finder did not converge after {0} iterations")]
    NonConvergence(usize),
    #[error("edges do not meet at the vertex")]
    EdgesDontMeet,
    #[error("quadratic differential has no finite critical point")]
    NoFiniteCriticalPoint,
}
