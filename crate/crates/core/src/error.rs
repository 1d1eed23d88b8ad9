use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid has {0} points, at least 8 are required")]
    GridTooSmall(usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("objects live on different grids")]
    GridMismatch,
    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("operator is not a valid effect: {0}")]
    NotAnEffect(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("incompatible outcome: probability {0:.3e} is below 1e-14")]
    IncompatibleOutcome(f64),
    #[error("sample set is empty")]
    EmptySet,
    #[error("sample set is unbounded where a bounded set is required")]
    UnboundedSet,
    #[error("invalid sample set: {0}")]
    InvalidSet(String),
    #[error("invalid history: {0}")]
    InvalidHistory(String),
    #[error("histories are defined on different time grids")]
    TimeGridMismatch,
    #[error("histories cannot be joined: {0}")]
    NotJoinable(String),
    #[error("resolution {delta} is not resolvable on a grid with spacing {dx}")]
    UnderResolved { delta: f64, dx: f64 },
    #[error("projector family is not exhaustive and exclusive: {0}")]
    NonExclusiveProjectors(String),
    #[error("mixed measurement kinds in one history are not supported")]
    MixedKinds,
    #[error("Markov kernel column sums deviate from 1 by {0:.3e}")]
    NonNormalizedKernel(f64),
    #[error("wave function too close to a node at x = {0}")]
    NearNode(f64),
    #[error("trajectory step failed at t = {0} after repeated step reduction")]
    StepFailure(f64),
    #[error("model does not satisfy the locality condition")]
    LocalityViolated,
    #[error("trace too short: {n} runs for burn-in {burn}")]
    TraceTooShort { n: usize, burn: usize },
    #[error("zero-probability branch reached while sampling")]
    DegenerateBranch,
    #[error("explicit tensor dimension {0} exceeds the cap of 1024")]
    ExplicitTooLarge(usize),
    #[error("momentum grid aliasing: {0}")]
    Aliasing(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
