//! One complete auction: clock phase, winner determination when the clock
//! overshoots, and the summary statistics.

use std::time::Duration;

use crate::bidder::BidderProfile;
use crate::clock::{run_clock_phase, ClockResult};
use crate::error::Result;
use crate::market::MarketConfig;
use crate::metrics::{summarize, AuctionOutcome};
use crate::wdp::{solve_wdp, Allocation, WdpInstance};

#[derive(Debug, Clone)]
pub struct AuctionRun {
    pub clock: ClockResult,
    pub allocation: Allocation,
    pub outcome: AuctionOutcome,
}

pub fn run_auction(
    market: &MarketConfig,
    bidders: &[BidderProfile],
    p_antenna: f64,
    time_budget: Option<Duration>,
) -> Result<AuctionRun> {
    let clock = run_clock_phase(market, bidders, p_antenna)?;
    let allocation = allocate(&clock, market, time_budget);
    let outcome = summarize(&clock, &allocation, market)?;
    Ok(AuctionRun {
        clock,
        allocation,
        outcome,
    })
}

/// Under oversupply the standing bids of the last excess round compete for
/// the spectrum; otherwise every bid of the terminal round fits and wins.
pub fn allocate(clock: &ClockResult, market: &MarketConfig, time_budget: Option<Duration>) -> Allocation {
    match clock.last_excess_round() {
        Some(round) if clock.oversupply() => {
            solve_wdp(&WdpInstance::from_round(round, market.total_spectrum), time_budget)
        }
        _ => {
            let terminal = WdpInstance::from_round(clock.terminal_round(), market.total_spectrum);
            let all: Vec<usize> = (0..terminal.bids.len()).collect();
            terminal.allocation(&all, true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bidder::BidderTemplate;

    #[test]
    fn uncontested_market_clears_at_reserve() {
        let market = MarketConfig {
            reserve_spectrum_price: 2.0,
            ..MarketConfig::default()
        };
        // 20 bidders x ~1.1 MHz fits in 50 MHz
        let template = BidderTemplate {
            r_min: 10_000.0,
            ..BidderTemplate::default()
        };
        let roster = template.roster(&market).unwrap();
        let run = run_auction(&market, &roster, 1.0, None).unwrap();
        assert_eq!(run.clock.rounds().len(), 1);
        assert_eq!(run.outcome.num_winners, 20);
        assert_eq!(run.outcome.clearing_spectrum_price, 2.0);
    }

    #[test]
    fn oversupply_goes_to_winner_determination() {
        let market = MarketConfig {
            reserve_spectrum_price: 1.0,
            price_increment: 0.02,
            ..MarketConfig::default()
        };
        let template = BidderTemplate {
            r_min: 100_000.0,
            ..BidderTemplate::default()
        };
        let roster = template.roster(&market).unwrap();
        let run = run_auction(&market, &roster, 0.0, None).unwrap();
        assert!(run.clock.oversupply());
        let last = run.clock.last_excess_round().unwrap();
        assert_eq!(run.outcome.clearing_spectrum_price, last.p_spectrum);
        let bw = last.bids[0].package.bandwidth;
        assert_eq!(run.outcome.num_winners as u64, market.total_spectrum / bw);
        assert!(run.allocation.optimal);
    }
}
