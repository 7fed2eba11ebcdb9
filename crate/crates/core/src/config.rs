//! TOML run configuration with `[market]`, `[bidder]` and `[sweep]` sections.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bidder::BidderTemplate;
use crate::error::{MarketError, Result};
use crate::market::MarketConfig;

/// Shipped defaults: 20 bidders, 64 antennas, 50 MHz.
pub const DEFAULT_CONFIG: &str = include_str!("../configs/default.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub market: MarketConfig,
    pub bidder: BidderTemplate,
    #[serde(default)]
    pub sweep: Option<SweepAxes>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxes {
    /// Kbps.
    pub rate_axis: Vec<f64>,
    /// Antenna fee as a multiple of value_per_kbps.
    pub antenna_cost_axis: Vec<f64>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| MarketError::Io {
            path: path.to_owned(),
            source,
        })?;
        let config = Self::parse(&text).map_err(|source| MarketError::Parse {
            path: path.to_owned(),
            source: Box::new(source),
        })?;
        config.market.validate()?;
        Ok(config)
    }

    pub fn default_config() -> Self {
        let config = Self::parse(DEFAULT_CONFIG).expect("bundled default config parses");
        debug_assert!(config.market.validate().is_ok());
        config
    }
}
