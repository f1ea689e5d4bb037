use core::fmt;

use alloc::string::String;

/// Errors produced by the analysis pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar argument fell outside its admissible domain.
    Domain { what: &'static str, value: f64 },
    /// Signal length is not a power of two (or too short to analyse).
    NonDyadic { len: usize },
    /// Non-finite sample found at the given position.
    NonFinite { index: usize },
    UnknownWavelet(String),
    /// Coefficient tree does not have the layout the caller expects.
    MalformedTree(&'static str),
    /// Root node has no parent.
    RootHasNoParent,
    /// Lorenz integration ran away.
    Divergence { step: usize },
    /// Parameter/posterior shapes disagree with the tree.
    ShapeMismatch(&'static str),
    /// Two signals that must have equal length do not.
    LengthMismatch { left: usize, right: usize },
    /// A per-node normalizer in the E-step vanished.
    Underflow { node: usize },
    /// Enumeration oracle would exceed its size bound.
    TooLarge { configurations: u128 },
    InvalidConfig(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    /// True for failures of the numerics (as opposed to bad arguments or input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Divergence { .. } | Error::Underflow { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of range: {value}"),
            Error::NonDyadic { len } => {
                write!(f, "signal length {len} is not a power of two >= 4")
            }
            Error::NonFinite { index } => write!(f, "non-finite sample at index {index}"),
            Error::UnknownWavelet(name) => write!(f, "unknown wavelet `{name}`"),
            Error::MalformedTree(why) => write!(f, "malformed wavelet tree: {why}"),
            Error::RootHasNoParent => f.write_str("the root node has no parent"),
            Error::Divergence { step } => {
                write!(f, "integration diverged (|state| > 1e6) at step {step}")
            }
            Error::ShapeMismatch(why) => write!(f, "shape mismatch: {why}"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::Underflow { node } => write!(f, "likelihood normalizer vanished at node {node}"),
            Error::TooLarge { configurations } => {
                write!(f, "enumeration over {configurations} configurations exceeds 2^20")
            }
            Error::InvalidConfig(why) => write!(f, "invalid configuration: {why}"),
        }
    }
}

impl core::error::Error for Error {}
