use thiserror::Error;

use crate::simulator::PopulationState;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A replica that failed inside an ensemble run.
#[derive(Debug, Clone)]
pub struct ReplicaFailure {
    pub replica_id: u64,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// An expansion would need basis functions beyond the configured order.
    #[error("truncation: result needs Hermite order {needed}, configured maximum is {max_order}")]
    Truncation { needed: u32, max_order: u32 },

    #[error("regime mismatch: {0}")]
    Regime(String),

    /// Population exceeded the configured cap; carries the state at the breach.
    #[error("population cap exceeded: {population} particles > cap {cap} at t = {clock}")]
    PopulationCap {
        population: usize,
        cap: usize,
        clock: f64,
        partial: Box<PopulationState>,
    },

    #[error("{} replica(s) failed, first: replica {} ({})", .0.len(), .0[0].replica_id, .0[0].message)]
    Replicas(Vec<ReplicaFailure>),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by resource limits (population caps).
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::PopulationCap { .. } | Error::Replicas(_))
    }

    /// True for errors raised while validating user-provided inputs.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::Input(_)
                | Error::IndexRange(_)
                | Error::Regime(_)
                | Error::Truncation { .. }
                | Error::Parse(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
