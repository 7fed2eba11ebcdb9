//! Virtual network operators: valuation, cost-minimising package choice and
//! the per-round bid/abstain decision.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{MarketError, Result};
use crate::market::MarketConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BidderId(pub u32);

impl fmt::Display for BidderId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One VNO. Its budget is `value_per_kbps * r_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct BidderProfile {
    pub id: BidderId,
    /// Kbps.
    pub r_min: f64,
    pub value_per_kbps: f64,
    pub min_antennas: u32,
    /// kHz.
    pub min_bandwidth: u64,
}

impl BidderProfile {
    pub fn budget(&self) -> f64 {
        self.value_per_kbps * self.r_min
    }

    pub fn validate(&self, market: &MarketConfig) -> Result<()> {
        if !(self.r_min.is_finite() && self.r_min > 0.0) {
            return Err(MarketError::config(format!(
                "bidder {}: r_min must be positive",
                self.id
            )));
        }
        if !(self.value_per_kbps.is_finite() && self.value_per_kbps >= 0.0) {
            return Err(MarketError::config(format!(
                "bidder {}: value_per_kbps must be non-negative",
                self.id
            )));
        }
        if self.min_antennas == 0 || self.min_antennas > market.total_antennas {
            return Err(MarketError::config(format!(
                "bidder {}: min_antennas must lie in [1, {}]",
                self.id, market.total_antennas
            )));
        }
        if !self.min_bandwidth.is_multiple_of(market.spectrum_unit) {
            return Err(MarketError::config(format!(
                "bidder {}: min_bandwidth must be a multiple of spectrum_unit",
                self.id
            )));
        }
        Ok(())
    }
}

/// An antenna/spectrum bundle priced at one pair of posted prices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Package {
    pub antennas: u32,
    /// kHz.
    pub bandwidth: u64,
    pub cost: f64,
}

impl Package {
    pub fn priced(antennas: u32, bandwidth: u64, p_spectrum: f64, p_antenna: f64) -> Package {
        Package {
            antennas,
            bandwidth,
            cost: p_spectrum * bandwidth as f64 + p_antenna * f64::from(antennas),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackageBid {
    pub bidder_id: BidderId,
    pub package: Package,
    pub round_index: usize,
}

/// Bandwidth each antenna count needs to reach a bidder's rate, computed once
/// and re-priced every round.
#[derive(Debug, Clone)]
pub struct PackageMenu {
    min_antennas: u32,
    bandwidths: Vec<u64>,
}

impl PackageMenu {
    pub fn new(profile: &BidderProfile, market: &MarketConfig) -> Result<Self> {
        profile.validate(market)?;
        let bandwidths = (profile.min_antennas..=market.total_antennas)
            .map(|m| {
                market
                    .required_bandwidth(profile.r_min, m)
                    .map(|b| b.max(profile.min_bandwidth))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PackageMenu {
            min_antennas: profile.min_antennas,
            bandwidths,
        })
    }

    /// Bandwidth needed with `antennas`, or `None` outside the feasible range.
    pub fn bandwidth(&self, antennas: u32) -> Option<u64> {
        let idx = antennas.checked_sub(self.min_antennas)? as usize;
        self.bandwidths.get(idx).copied()
    }

    /// Single linear pass over antenna counts; ties go to fewer antennas.
    pub fn cheapest(&self, p_spectrum: f64, p_antenna: f64) -> Result<Package> {
        check_prices(p_spectrum, p_antenna)?;
        let mut best: Option<Package> = None;
        for (m, &bandwidth) in (self.min_antennas..).zip(&self.bandwidths) {
            let candidate = Package::priced(m, bandwidth, p_spectrum, p_antenna);
            if best.is_none_or(|b| candidate.cost < b.cost) {
                best = Some(candidate);
            }
        }
        // The menu always holds at least min_antennas..=total_antennas.
        Ok(best.expect("package menu is never empty"))
    }
}

fn check_prices(p_spectrum: f64, p_antenna: f64) -> Result<()> {
    if !(p_spectrum.is_finite() && p_spectrum >= 0.0) {
        return Err(MarketError::invalid(format!(
            "spectrum price must be non-negative, got {p_spectrum}"
        )));
    }
    if !(p_antenna.is_finite() && p_antenna >= 0.0) {
        return Err(MarketError::invalid(format!(
            "antenna price must be non-negative, got {p_antenna}"
        )));
    }
    Ok(())
}

/// Cheapest package meeting the bidder's rate at the posted prices.
pub fn optimal_package(
    profile: &BidderProfile,
    p_spectrum: f64,
    p_antenna: f64,
    market: &MarketConfig,
) -> Result<Package> {
    PackageMenu::new(profile, market)?.cheapest(p_spectrum, p_antenna)
}

/// Bid iff the package fits the budget (boundary inclusive).
pub fn decide_bid(profile: &BidderProfile, pkg: Package, round_index: usize) -> Option<PackageBid> {
    (pkg.cost <= profile.budget()).then_some(PackageBid {
        bidder_id: profile.id,
        package: pkg,
        round_index,
    })
}

/// Shared parameters from which a roster is instantiated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BidderTemplate {
    /// Kbps.
    pub r_min: f64,
    #[serde(default = "default_value_per_kbps")]
    pub value_per_kbps: f64,
    #[serde(default = "default_min_antennas")]
    pub min_antennas: u32,
    /// kHz.
    #[serde(default)]
    pub min_bandwidth: u64,
    /// Relative spread of r_min across bidders, drawn uniformly from
    /// `[-rate_jitter, rate_jitter]` with the market seed. Zero gives
    /// identical bidders.
    #[serde(default)]
    pub rate_jitter: f64,
}

fn default_value_per_kbps() -> f64 {
    1.0
}

fn default_min_antennas() -> u32 {
    1
}

impl BidderTemplate {
    pub fn with_rate(&self, r_min: f64) -> Self {
        BidderTemplate {
            r_min,
            ..self.clone()
        }
    }

    /// `market.num_bidders` profiles with ids `0..n`.
    pub fn roster(&self, market: &MarketConfig) -> Result<Vec<BidderProfile>> {
        if !(self.rate_jitter.is_finite() && (0.0..1.0).contains(&self.rate_jitter)) {
            return Err(MarketError::config("rate_jitter must lie in [0, 1)"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(market.rng_seed);
        let roster = (0..market.num_bidders)
            .map(|i| {
                let scale = if self.rate_jitter > 0.0 {
                    1.0 + rng.gen_range(-self.rate_jitter..=self.rate_jitter)
                } else {
                    1.0
                };
                BidderProfile {
                    id: BidderId(i as u32),
                    r_min: self.r_min * scale,
                    value_per_kbps: self.value_per_kbps,
                    min_antennas: self.min_antennas,
                    min_bandwidth: self.min_bandwidth,
                }
            })
            .collect::<Vec<_>>();
        for p in &roster {
            p.validate(market)?;
        }
        Ok(roster)
    }
}

impl Default for BidderTemplate {
    fn default() -> Self {
        BidderTemplate {
            r_min: 100_000.0,
            value_per_kbps: default_value_per_kbps(),
            min_antennas: default_min_antennas(),
            min_bandwidth: 0,
            rate_jitter: 0.0,
        }
    }
}
