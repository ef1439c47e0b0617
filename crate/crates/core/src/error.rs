//! Error type shared by all simulation modules.

use alloc::string::String;
use core::fmt;

/// Errors produced by the channel-model and simulation primitives.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation.
    Domain(&'static str),
    /// A stated precondition does not hold.
    Precondition(&'static str),
    /// A configuration or type invariant is violated. The message names
    /// the violated invariant.
    Invalid(String),
    /// A transition-matrix row is not a probability vector.
    NotStochastic { row: usize, sum: f64 },
    /// The Markov chain has no unique stationary distribution.
    Reducible,
    /// A Markov state is absorbing and has no finite mean sojourn.
    Absorbing { state: usize },
    /// All state durations are zero; power allocation is undefined.
    DegenerateDurations,
    /// A sample index requires stream samples outside the provided window.
    WindowOutOfRange { index: usize, len: usize },
    /// A bit stream has odd length and cannot be mapped to 4QAM symbols.
    OddBitCount(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::Precondition(what) => write!(f, "precondition violated: {what}"),
            Error::Invalid(msg) => write!(f, "invalid configuration: {msg}"),
            Error::NotStochastic { row, sum } => {
                write!(f, "row {row} is not a probability vector (sum = {sum})")
            }
            Error::Reducible => write!(f, "chain is reducible: no unique stationary distribution"),
            Error::Absorbing { state } => write!(f, "state {state} is absorbing"),
            Error::WindowOutOfRange { index, len } => {
                write!(f, "sample window around index {index} exceeds stream of length {len}")
            }
            Error::DegenerateDurations => write!(f, "all state durations are zero"),
            Error::OddBitCount(n) => write!(f, "bit stream length {n} is odd"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
