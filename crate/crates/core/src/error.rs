use thiserror::Error;

use crate::model::Verdict;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("invalid catalog: {0}")]
    InvalidCatalog(String),
    #[error("invalid availability: {0}")]
    InvalidAvailability(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("infeasible plan:\n{0}")]
    Infeasible(Verdict),
    #[error("plans with non-empty internal caches cannot be evaluated (core filtering is not modeled)")]
    UnsupportedInternalCaches,
    #[error("search space of {states} states exceeds the oracle limit of {limit}")]
    SearchSpaceTooLarge { states: u128, limit: u128 },
    #[error("instance exceeds oracle limits: {0}")]
    InstanceTooLarge(String),
    #[error("request trace is empty: every demand rounds to zero requests at quantum {0}")]
    EmptyTrace(f64),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
