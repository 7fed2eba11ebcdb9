//! Outcome statistics for one auction.

use crate::clock::ClockResult;
use crate::error::{MarketError, Result};
use crate::market::MarketConfig;
use crate::wdp::Allocation;

#[derive(Debug, Clone, PartialEq)]
pub struct AuctionOutcome {
    pub allocation: Allocation,
    /// Price per kHz the winners pay.
    pub clearing_spectrum_price: f64,
    pub p_antenna: f64,
    pub combined_revenue: f64,
    pub antenna_revenue: f64,
    pub spectrum_revenue: f64,
    pub num_winners: usize,
    /// Zero when nobody wins.
    pub mean_antennas: f64,
    /// kHz; zero when nobody wins.
    pub mean_bandwidth: f64,
}

/// Column order of [`AuctionOutcome::csv_row`]. Append-only.
pub const OUTCOME_COLUMNS: [&str; 10] = [
    "num_winners",
    "combined_revenue",
    "antenna_revenue",
    "spectrum_revenue",
    "clearing_spectrum_price",
    "p_antenna",
    "mean_antennas",
    "mean_bandwidth_khz",
    "spectrum_used_khz",
    "wdp_optimal",
];

impl AuctionOutcome {
    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.num_winners.to_string(),
            self.combined_revenue.to_string(),
            self.antenna_revenue.to_string(),
            self.spectrum_revenue.to_string(),
            self.clearing_spectrum_price.to_string(),
            self.p_antenna.to_string(),
            self.mean_antennas.to_string(),
            self.mean_bandwidth.to_string(),
            self.allocation.spectrum_used.to_string(),
            self.allocation.optimal.to_string(),
        ]
    }
}

/// Derives the reported statistics from a finished clock phase and its
/// allocation. Winners must come from the round whose prices they pay: the
/// last excess-demand round under oversupply, the terminal round otherwise.
pub fn summarize(
    clock: &ClockResult,
    allocation: &Allocation,
    market: &MarketConfig,
) -> Result<AuctionOutcome> {
    let source = match clock.last_excess_round() {
        Some(round) if clock.oversupply() => round,
        _ => clock.terminal_round(),
    };
    for bid in &allocation.winning_bids {
        if !source.bids.contains(bid) {
            return Err(MarketError::Consistency(format!(
                "winning bid of bidder {} is not among the bids of round {}",
                bid.bidder_id, source.round_index
            )));
        }
    }
    let num_winners = allocation.num_winners();
    if num_winners > market.num_bidders {
        return Err(MarketError::Consistency(format!(
            "{num_winners} winners from {} bidders",
            market.num_bidders
        )));
    }
    let bandwidth: u64 = allocation.winning_bids.iter().map(|b| b.package.bandwidth).sum();
    let antennas: u64 = allocation
        .winning_bids
        .iter()
        .map(|b| u64::from(b.package.antennas))
        .sum();
    if bandwidth > market.total_spectrum || bandwidth != allocation.spectrum_used {
        return Err(MarketError::Consistency(format!(
            "allocated {bandwidth} kHz (recorded {}) of {}",
            allocation.spectrum_used, market.total_spectrum
        )));
    }

    let spectrum_revenue = source.p_spectrum * bandwidth as f64;
    let antenna_revenue = source.p_antenna * antennas as f64;
    let (mean_antennas, mean_bandwidth) = if num_winners == 0 {
        (0.0, 0.0)
    } else {
        let n = num_winners as f64;
        (antennas as f64 / n, bandwidth as f64 / n)
    };
    Ok(AuctionOutcome {
        allocation: allocation.clone(),
        clearing_spectrum_price: source.p_spectrum,
        p_antenna: source.p_antenna,
        combined_revenue: antenna_revenue + spectrum_revenue,
        antenna_revenue,
        spectrum_revenue,
        num_winners,
        mean_antennas,
        mean_bandwidth,
    })
}
