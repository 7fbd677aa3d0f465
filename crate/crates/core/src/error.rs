use std::path::PathBuf;

use thiserror::Error;

use crate::aoi::CostViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("threshold {x} outside 1..={slots}")]
    ThresholdOutOfRange { x: usize, slots: usize },

    #[error("source index {index} out of range for {sources} sources")]
    SourceOutOfRange { index: usize, sources: usize },

    #[error("{what}: expected length {expected}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid cost function: {0}")]
    InvalidCost(#[from] CostViolation),

    #[error("chosen threshold {index} has zero probability; importance estimate undefined")]
    ZeroProbability { index: usize },

    #[error("loss {0} outside [0, 1]")]
    LossOutOfRange(f64),

    #[error("cost sample at AoI {key} is {value}, above bound {bound}")]
    SampleAboveBound { key: usize, value: f64, bound: f64 },

    #[error("cost samples decrease from AoI {lower} to AoI {upper}")]
    NonMonotoneSamples { lower: usize, upper: usize },

    #[error("cost sample key {key} outside 1..={slots}")]
    SampleKeyOutOfRange { key: usize, slots: usize },

    #[error("enumeration needs {required} schedules, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("observable vector for node {node} has zero norm")]
    ZeroNormObservable { node: usize },

    #[error("invalid value for `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

impl Error {
    /// Process exit status for the CLI: 1 for bad input, 3 for an exceeded
    /// enumeration budget, 2 for anything that went wrong while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 3,
            Error::Io { .. } | Error::ZeroProbability { .. } | Error::ZeroNormObservable { .. } => 2,
            _ => 1,
        }
    }
}
