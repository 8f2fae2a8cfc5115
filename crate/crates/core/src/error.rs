use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A phase or state argument fell outside `[0, 1]`.
    OutOfDomain { quantity: &'static str, value: f64 },
    /// A model parameter violates its invariant.
    InvalidParameter { name: &'static str, reason: &'static str },
    /// An initial phase is not in `(0, 1]`.
    InvalidInitialPhase { index: usize, value: f64 },
    LengthMismatch { expected: usize, found: usize },
    IndexOutOfRange { index: usize, len: usize },
    /// A pending spike whose offset is not in `(0, tau]`.
    InvalidSpike { source: usize, offset: f64 },
    /// An injected spike disagrees with its source's phase (`offset != tau - phase`).
    InconsistentSpike { source: usize, offset: f64, phase: f64 },
    /// The engine found no future event.
    NoFutureEvent,
    /// A constructed scenario's preconditions do not hold.
    InfeasibleScenario(&'static str),
    /// A simulation diverged from a shape the analysis relies on.
    Structural(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfDomain { quantity, value } => {
                write!(f, "{quantity} = {value} is outside [0, 1]")
            }
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::InvalidInitialPhase { index, value } => {
                write!(f, "initial phase {index} = {value} is not in (0, 1]")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} phases, found {found}")
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "oscillator index {index} out of range for {len} oscillators")
            }
            Error::InvalidSpike { source, offset } => {
                write!(f, "spike from {source} has offset {offset} outside (0, tau]")
            }
            Error::InconsistentSpike { source, offset, phase } => write!(
                f,
                "spike from {source} with offset {offset} is inconsistent with phase {phase}"
            ),
            Error::NoFutureEvent => f.write_str("no future event in the network"),
            Error::InfeasibleScenario(why) => write!(f, "infeasible scenario: {why}"),
            Error::Structural(why) => write!(f, "structural error: {why}"),
        }
    }
}

impl core::error::Error for Error {}
