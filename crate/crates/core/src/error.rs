use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A probability below zero.
    NegativeProbability { state: String, p: f64 },
    /// Probabilities do not sum to one; `deficit` is `1 - sum`.
    NotNormalized { sum: f64, deficit: f64 },
    MalformedState(String),
    DuplicateVariable(String),
    UnknownVariable(String),
    EmptyKeepSet,
    /// The conditioning event has zero probability.
    ZeroProbabilityCondition,
    ZeroProbabilityTarget,
    OverlappingBlocks,
    /// Variable sets that must be disjoint share a member.
    OverlappingSets,
    EmptyBlock,
    InvalidSplit(String),
    /// Too few or too many variables for the requested measure.
    InvalidArity { measure: &'static str, got: usize },
    UnsupportedSourceCount(usize),
    InvalidAntichain(String),
    /// A quantity that theory guarantees positive came out zero or negative.
    InternalInconsistency(String),
    DecompositionError { node: String, value: f64 },
    ParamOutOfRange { name: &'static str, value: f64 },
    NonPositiveBinWidth(f64),
    DuplicateChannel(String),
    UnknownChannel(String),
    TooShort { bins: usize, needed: usize },
    EmptyInput,
    UnknownMeasure(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NegativeProbability { state, p } => {
                write!(f, "negative probability {p} for state {state}")
            }
            Error::NotNormalized { sum, deficit } => {
                write!(f, "probabilities sum to {sum} (deficit {deficit:e})")
            }
            Error::MalformedState(msg) => write!(f, "malformed state: {msg}"),
            Error::DuplicateVariable(name) => write!(f, "duplicate variable name `{name}`"),
            Error::UnknownVariable(v) => write!(f, "unknown variable {v}"),
            Error::EmptyKeepSet => f.write_str("cannot marginalize onto an empty variable set"),
            Error::ZeroProbabilityCondition => {
                f.write_str("conditioning event has zero probability")
            }
            Error::ZeroProbabilityTarget => f.write_str("target state has zero probability"),
            Error::OverlappingBlocks => f.write_str("grouping blocks overlap"),
            Error::OverlappingSets => f.write_str("variable sets must be disjoint"),
            Error::EmptyBlock => f.write_str("grouping block is empty"),
            Error::InvalidSplit(msg) => write!(f, "invalid source/target split: {msg}"),
            Error::InvalidArity { measure, got } => {
                write!(f, "{measure} is not defined for {got} variable(s)")
            }
            Error::UnsupportedSourceCount(n) => {
                write!(f, "partial information decomposition supports 2 or 3 sources, got {n}")
            }
            Error::InvalidAntichain(msg) => write!(f, "invalid antichain: {msg}"),
            Error::InternalInconsistency(msg) => write!(f, "internal inconsistency: {msg}"),
            Error::DecompositionError { node, value } => {
                write!(f, "partial information term {node} is negative ({value:e})")
            }
            Error::ParamOutOfRange { name, value } => {
                write!(f, "parameter {name} = {value} is outside [0, 1]")
            }
            Error::NonPositiveBinWidth(w) => write!(f, "bin width must be positive, got {w}"),
            Error::DuplicateChannel(c) => write!(f, "channel `{c}` used twice"),
            Error::UnknownChannel(c) => write!(f, "unknown channel `{c}`"),
            Error::TooShort { bins, needed } => {
                write!(f, "raster has {bins} bin(s), at least {needed} needed")
            }
            Error::EmptyInput => f.write_str("no results to summarize"),
            Error::UnknownMeasure(m) => write!(f, "unknown measure `{m}`"),
        }
    }
}

impl core::error::Error for Error {}
