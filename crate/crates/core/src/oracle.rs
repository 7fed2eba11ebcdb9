//! Reference solvers used by the `check` subcommand and the test suites.
//!
//! These take deliberately different routes from the production code: the
//! bandwidth for each antenna count is found by bisection on the rate
//! function instead of inverting it, and the argmin is taken over a fully
//! materialised cost table.

use crate::bidder::{BidderProfile, Package};
use crate::error::{MarketError, Result};
use crate::market::MarketConfig;

/// Smallest multiple of `spectrum_unit` whose rate reaches `r_min`, by bisection.
pub fn bisect_bandwidth(market: &MarketConfig, r_min: f64, antennas: u32) -> Result<u64> {
    if !(r_min.is_finite() && r_min > 0.0) {
        return Err(MarketError::invalid("required rate must be positive"));
    }
    let model = market.rate_model();
    let unit = market.spectrum_unit;
    let reaches = |units: u64| -> Result<bool> { Ok(model.rate((units * unit) as f64, antennas)? >= r_min) };

    let mut hi = 1u64;
    while !reaches(hi)? {
        hi *= 2;
    }
    // rate(0) = 0 < r_min, so lo never reaches
    let mut lo = 0u64;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi * unit)
}

/// Exhaustive scan over every admissible antenna count.
pub fn exhaustive_package(
    profile: &BidderProfile,
    p_spectrum: f64,
    p_antenna: f64,
    market: &MarketConfig,
) -> Result<Package> {
    if p_spectrum < 0.0 || p_antenna < 0.0 {
        return Err(MarketError::invalid("prices must be non-negative"));
    }
    let table = (profile.min_antennas..=market.total_antennas)
        .map(|m| {
            let bandwidth = bisect_bandwidth(market, profile.r_min, m)?.max(profile.min_bandwidth);
            Ok(Package::priced(m, bandwidth, p_spectrum, p_antenna))
        })
        .collect::<Result<Vec<_>>>()?;
    let min_cost = table
        .iter()
        .map(|p| p.cost)
        .fold(f64::INFINITY, f64::min);
    table
        .into_iter()
        .filter(|p| p.cost == min_cost)
        .min_by_key(|p| p.antennas)
        .ok_or_else(|| MarketError::invalid("no admissible antenna count"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_agrees_with_closed_form() {
        let market = MarketConfig::default();
        for r in [1.0, 17.5, 3_459.0, 345_940.0, 1e6] {
            for m in [1, 2, 10, 64] {
                assert_eq!(
                    bisect_bandwidth(&market, r, m).unwrap(),
                    market.required_bandwidth(r, m).unwrap()
                );
            }
        }
    }
}
