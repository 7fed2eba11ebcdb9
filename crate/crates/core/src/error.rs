use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = MarketError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum MarketError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("instance too large for exhaustive search: {bids} bids (limit {limit})")]
    InstanceTooLarge { bids: usize, limit: usize },

    #[error("inconsistent outcome: {0}")]
    Consistency(String),

    #[error("clock invariant violated: {0}")]
    Invariant(String),

    #[error("sweep cell (r_min = {r_min} Kbps, alpha = {alpha}) failed: {source}")]
    Cell {
        r_min: f64,
        alpha: f64,
        #[source]
        source: Box<MarketError>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: Box<toml::de::Error>,
    },
}

impl MarketError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        MarketError::InvalidArgument(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        MarketError::Config(msg.into())
    }
}
