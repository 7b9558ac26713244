use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("Euler characteristic violated: V - E + F = {v} - {e} + {f} != 2")]
    EulerViolation { v: usize, e: usize, f: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("malformed rotation system: {0}")]
    MalformedRotation(String),
    #[error("graph is not simple")]
    NotSimple,
    #[error("graph has {n} vertices, above the cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("degree {0} is too small, need d >= 2")]
    DegreeTooSmall(usize),
    #[error("outer cycles differ in length: {plus} vs {minus}")]
    LengthMismatch { plus: usize, minus: usize },
    #[error("not a labeled 2-connected outerplanar graph: {0}")]
    NotOuterplanar(String),
    #[error("not a Hamiltonian cycle: {0}")]
    NotHamiltonianCycle(String),
    #[error("graph has no Hamiltonian cycle")]
    NotHamiltonian,
    #[error("connectivity order {0} unsupported, expected 2 or 3")]
    UnsupportedOrder(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PackingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("radius iteration did not converge within {max_iters} sweeps (angle error {error:e})")]
    NoConvergence { max_iters: usize, error: f64 },
    #[error("layout residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },
    #[error("normalization points are degenerate")]
    DegeneratePoints,
    #[error("contact graph is not polyhedral (3-connected)")]
    NotPolyhedral,
    #[error("packing does not match its graph: {0}")]
    Mismatch(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("degenerate circle")]
    DegenerateCircle,
    #[error("word is not reduced at position {0}")]
    WordNotReduced(usize),
    #[error("generator index {index} out of range for {n} circles")]
    BadGenerator { index: usize, n: usize },
    #[error("disk count {count} exceeds the cap {cap}")]
    ExplosionGuard { count: usize, cap: usize },
    #[error("point lies outside every closed disk")]
    OutsideDomain,
    #[error("iterate left the closed disks at step {0}")]
    EscapedToOmega(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AngleError {
    #[error("vertices {0} and {1} are adjacent on the polygon")]
    AdjacentVertices(usize, usize),
    #[error("no leaf found for chord {{{0}, {1}}}")]
    NotFound(usize, usize),
    #[error("iterate {step} hits the partition point {index}/(d+1)")]
    BoundaryHit { step: usize, index: usize },
    #[error("leaves are linked: {0}")]
    LinkedLeaves(String),
    #[error("lamination is not invariant: {0}")]
    NonInvariantLamination(String),
    #[error("nested arc still wider than tolerance after {0} steps")]
    DepthInsufficient(usize),
    #[error("degree {0} is too small, need d >= 2")]
    DegreeTooSmall(usize),
    #[error("bad angle: {0}")]
    BadAngle(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapError {
    #[error("root finding failed: {0}")]
    RootFindingFailure(String),
    #[error("neutral fixed point detected (|multiplier| = {0})")]
    NeutralDetected(f64),
    #[error("fixed point count {found} differs from expected {expected}")]
    CountMismatch { found: usize, expected: usize },
    #[error("numerator and denominator share a root")]
    CommonRoot,
    #[error("invalid map: {0}")]
    Invalid(String),
    #[error("unknown map name {0}")]
    UnknownMap(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatingError {
    #[error("laminations have different degrees {0} and {1}")]
    DegreeMismatch(u32, u32),
    #[error(transparent)]
    Angle(#[from] AngleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph gluing and lamination test disagree: {0}")]
    CrossCheckMismatch(String),
}

/// Umbrella error for callers that mix modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Packing(#[from] PackingError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Angle(#[from] AngleError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Mating(#[from] MatingError),
    #[error("invalid document: {0}")]
    Document(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
