//! Ascending clock phase.
//!
//! The auctioneer posts a per-kHz spectrum price, every bidder answers with
//! its cheapest package (or abstains when that exceeds its budget), and the
//! price is raised by a fixed increment while aggregate spectrum demand
//! exceeds supply. The antenna fee never changes and antennas never count
//! toward excess demand: the pool is shared by all winners.

use std::io::Write;

use crate::bidder::{decide_bid, BidderId, BidderProfile, Package, PackageBid, PackageMenu};
use crate::error::{MarketError, Result};
use crate::market::MarketConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub round_index: usize,
    pub p_spectrum: f64,
    pub p_antenna: f64,
    pub bids: Vec<PackageBid>,
    /// Bidders that sat the round out, with the package they priced.
    pub abstentions: Vec<(BidderId, Package)>,
    /// kHz.
    pub aggregate_spectrum_demand: u64,
    pub excess_demand: bool,
}

/// Full round history of one clock phase. The last round is the terminal
/// round and is the only one without excess demand.
#[derive(Debug, Clone, PartialEq)]
pub struct ClockResult {
    rounds: Vec<RoundRecord>,
    total_spectrum: u64,
}

impl ClockResult {
    pub fn rounds(&self) -> &[RoundRecord] {
        &self.rounds
    }

    pub fn terminal_round(&self) -> &RoundRecord {
        self.rounds.last().expect("clock phase has at least one round")
    }

    /// The last round that still had excess demand, if any.
    pub fn last_excess_round(&self) -> Option<&RoundRecord> {
        self.rounds.len().checked_sub(2).map(|i| &self.rounds[i])
    }

    /// Demand fell below supply after an excess round: the standing bids of
    /// `last_excess_round` go to winner determination.
    pub fn oversupply(&self) -> bool {
        self.last_excess_round().is_some()
            && self.terminal_round().aggregate_spectrum_demand < self.total_spectrum
    }

    /// Re-checks the structural guarantees of a completed clock phase:
    /// additive price steps, a single terminal round without excess, and
    /// per-bidder demand moving toward antennas as the price rises.
    pub fn check_invariants(&self, market: &MarketConfig) -> Result<()> {
        let fail = |msg: String| Err(MarketError::Invariant(msg));
        for (i, round) in self.rounds.iter().enumerate() {
            let demand: u64 = round.bids.iter().map(|b| b.package.bandwidth).sum();
            if demand != round.aggregate_spectrum_demand {
                return fail(format!("round {i}: aggregate demand mismatch"));
            }
            if round.excess_demand != (demand > market.total_spectrum) {
                return fail(format!("round {i}: excess flag mismatch"));
            }
            let is_last = i + 1 == self.rounds.len();
            if round.excess_demand == is_last {
                return fail(format!("round {i}: excess demand out of place"));
            }
            if round.bids.iter().any(|b| b.package.antennas > market.total_antennas) {
                return fail(format!("round {i}: bid exceeds the antenna pool"));
            }
        }
        for (i, pair) in self.rounds.windows(2).enumerate() {
            let (prev, next) = (&pair[0], &pair[1]);
            if next.p_spectrum != prev.p_spectrum + market.price_increment {
                return fail(format!("round {}: price did not step by the increment", i + 1));
            }
            if next.p_antenna != prev.p_antenna {
                return fail(format!("round {}: antenna price changed", i + 1));
            }
            for (id, pkg) in prev.packages() {
                let Some((_, later)) = next.packages().find(|(other, _)| *other == id) else {
                    return fail(format!("round {}: bidder {id} missing", i + 1));
                };
                if later.bandwidth > pkg.bandwidth || later.antennas < pkg.antennas {
                    return fail(format!(
                        "round {}: bidder {id} demand moved against the price",
                        i + 1
                    ));
                }
            }
        }
        Ok(())
    }
}

impl RoundRecord {
    /// Every bidder's priced package this round, bidding or not.
    pub fn packages(&self) -> impl Iterator<Item = (BidderId, Package)> + '_ {
        self.bids
            .iter()
            .map(|b| (b.bidder_id, b.package))
            .chain(self.abstentions.iter().copied())
    }
}

/// True iff the summed bandwidth of `bids` exceeds the spectrum on offer.
pub fn detect_excess(bids: &[PackageBid], market: &MarketConfig) -> bool {
    bids.iter().map(|b| b.package.bandwidth).sum::<u64>() > market.total_spectrum
}

pub fn run_clock_phase(
    market: &MarketConfig,
    bidders: &[BidderProfile],
    p_antenna: f64,
) -> Result<ClockResult> {
    market.validate()?;
    if bidders.is_empty() {
        return Err(MarketError::config("bidder roster is empty"));
    }
    if !(p_antenna.is_finite() && p_antenna >= 0.0) {
        return Err(MarketError::invalid(format!(
            "antenna price must be non-negative, got {p_antenna}"
        )));
    }
    let menus = bidders
        .iter()
        .map(|b| PackageMenu::new(b, market))
        .collect::<Result<Vec<_>>>()?;

    let mut rounds = Vec::new();
    let mut p_spectrum = market.reserve_spectrum_price;
    loop {
        let round_index = rounds.len();
        let mut bids = Vec::with_capacity(bidders.len());
        let mut abstentions = Vec::new();
        for (profile, menu) in bidders.iter().zip(&menus) {
            let pkg = menu.cheapest(p_spectrum, p_antenna)?;
            match decide_bid(profile, pkg, round_index) {
                Some(bid) => bids.push(bid),
                None => abstentions.push((profile.id, pkg)),
            }
        }
        let aggregate_spectrum_demand = bids.iter().map(|b| b.package.bandwidth).sum();
        let excess_demand = detect_excess(&bids, market);
        rounds.push(RoundRecord {
            round_index,
            p_spectrum,
            p_antenna,
            bids,
            abstentions,
            aggregate_spectrum_demand,
            excess_demand,
        });
        if !excess_demand {
            break;
        }
        let next = p_spectrum + market.price_increment;
        if next <= p_spectrum {
            return Err(MarketError::config(format!(
                "price_increment {} is below the resolution of price {p_spectrum}",
                market.price_increment
            )));
        }
        p_spectrum = next;
    }
    Ok(ClockResult {
        rounds,
        total_spectrum: market.total_spectrum,
    })
}

pub const TRACE_HEADER: [&str; 7] = [
    "round",
    "price",
    "bidder",
    "antennas",
    "bandwidth_khz",
    "cost",
    "decision",
];

/// Per-round, per-bidder CSV trace of a clock phase.
pub fn write_trace<W: Write>(clock: &ClockResult, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for round in clock.rounds() {
        let mut lines: Vec<(BidderId, &Package, &str)> = round
            .bids
            .iter()
            .map(|b| (b.bidder_id, &b.package, "bid"))
            .chain(round.abstentions.iter().map(|(id, p)| (*id, p, "abstain")))
            .collect();
        lines.sort_by_key(|(id, _, _)| *id);
        for (id, pkg, decision) in lines {
            w.write_record([
                round.round_index.to_string(),
                round.p_spectrum.to_string(),
                id.to_string(),
                pkg.antennas.to_string(),
                pkg.bandwidth.to_string(),
                pkg.cost.to_string(),
                decision.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
