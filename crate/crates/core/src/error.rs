use num_complex::Complex64;
use std::fmt;

use crate::analytic::Disk;

/// Location and content of a DSL syntax error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input text.
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at byte {}: expected {}, found {}",
            self.position, self.expected, self.found
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("point {z} lies outside the domain disk (center {}, radius {})", .domain.center, .domain.radius)]
    DomainExceeded { z: Complex64, domain: Disk },
    #[error("point {z} lies outside the strip {lower} < Re z < 0")]
    OutsideStrip { z: Complex64, lower: f64 },
    #[error("value is not representable in double precision")]
    Overflow,
    #[error("parse error {0}")]
    Parse(ParseError),
    #[error("unbound parameter `{name}` at byte {position}")]
    UnboundParam { name: String, position: usize },
    #[error("unsupported construct ({construct}) at byte {position}")]
    UnsupportedConstruct { construct: String, position: usize },
    #[error("in source `{name}`: {source}")]
    Source {
        name: String,
        #[source]
        source: Box<Error>,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("f - a nearly vanishes on the contour (min modulus {min_modulus:e} near {near})")]
    BoundaryRoot { min_modulus: f64, near: Complex64 },
    #[error("no convergence: {0}")]
    NonConvergent(String),
    #[error("roots closer than the cluster tolerance near {near} could not be separated")]
    ClusterUnresolved { near: Complex64 },
    #[error("hypothesis could not be checked: {0}")]
    HypothesisUnchecked(String),
    #[error("stopping rule not met before r reached eps/2 (r = {r}, eps = {eps})")]
    NoStop { r: f64, eps: f64 },
    #[error("guard rejected the input: {0}")]
    GuardRejected(String),
    #[error("sampled bound violated: {0}")]
    BoundViolated(String),
    #[error("no 1-point within radius {radius}")]
    NoUnitPoint { radius: f64 },
    #[error("integration path passes too close to a zero near {near}")]
    PathTooCloseToZero { near: Complex64 },
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergent(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("premise failed: {0}")]
    PremiseFailed(String),
    #[error("function does not omit {value} on the disk ({count} points found)")]
    OmissionFailed { value: f64, count: u32 },
    #[error("verdict indeterminate within the error budget: {0}")]
    Indeterminate(String),
    #[error("bisection bracket invalid: {0}")]
    BracketInvalid(String),
    #[error("zero on the integration circle: {0}")]
    BoundaryZero(String),
    #[error("schedule invalid: {0}")]
    ScheduleInvalid(String),
}

impl Error {
    /// True for errors caused by malformed user input rather than by a computation.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Parse(_)
            | Error::UnboundParam { .. }
            | Error::UnsupportedConstruct { .. }
            | Error::Io(_)
            | Error::Schema(_)
            | Error::InvalidGrid(_)
            | Error::InvalidArgument(_)
            | Error::ScheduleInvalid(_) => true,
            Error::Source { source, .. } => source.is_input_error(),
            _ => false,
        }
    }

    /// Strips `Source` wrappers.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Source { source, .. } => source.root_cause(),
            e => e,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
