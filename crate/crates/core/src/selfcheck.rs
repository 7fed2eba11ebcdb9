//! Oracle-equivalence self-tests behind the `check` subcommand.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bidder::{optimal_package, BidderId, BidderProfile, Package, PackageBid};
use crate::error::Result;
use crate::market::MarketConfig;
use crate::oracle::exhaustive_package;
use crate::wdp::{brute_force_wdp, solve_wdp, WdpInstance};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CheckReport {
    pub bidder_cases: usize,
    pub bidder_mismatches: usize,
    pub wdp_cases: usize,
    pub wdp_revenue_mismatches: usize,
    pub wdp_winner_mismatches: usize,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.bidder_mismatches == 0 && self.wdp_revenue_mismatches == 0 && self.wdp_winner_mismatches == 0
    }
}

pub fn random_profile<R: Rng>(rng: &mut R, market: &MarketConfig) -> BidderProfile {
    let unit = market.spectrum_unit;
    BidderProfile {
        id: BidderId(rng.gen_range(0..100)),
        r_min: rng.gen_range(1.0..600_000.0),
        value_per_kbps: rng.gen_range(0.1..10.0),
        min_antennas: if rng.gen_bool(0.5) {
            1
        } else {
            rng.gen_range(1..=market.total_antennas)
        },
        min_bandwidth: if rng.gen_bool(0.5) {
            0
        } else {
            rng.gen_range(0..=market.total_spectrum / unit / 2) * unit
        },
    }
}

/// Random instance with up to `max_bids` bids. Bandwidths come from a small
/// menu so that exact ties and duplicate packages are common.
pub fn random_wdp_instance<R: Rng>(rng: &mut R, max_bids: usize) -> WdpInstance {
    let p_spectrum = if rng.gen_bool(0.1) { 0.0 } else { rng.gen_range(0.0..12.0) };
    let p_antenna = if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..500.0) };
    let menu = [1_000u64, 2_500, 4_000, 5_000, 8_000, 12_500, 20_000, 25_000, 55_000];
    let n = rng.gen_range(0..=max_bids);
    let bids = (0..n)
        .map(|_| {
            let antennas = if rng.gen_bool(0.5) { 64 } else { rng.gen_range(1..=64) };
            let bandwidth = menu[rng.gen_range(0..menu.len())];
            PackageBid {
                bidder_id: BidderId(rng.gen_range(0..20)),
                package: Package::priced(antennas, bandwidth, p_spectrum, p_antenna),
                round_index: 0,
            }
        })
        .collect();
    WdpInstance {
        bids,
        total_spectrum: rng.gen_range(1..=12) * 5_000,
        p_spectrum,
        p_antenna,
    }
}

pub fn run_self_check(seed: u64, bidder_cases: usize, wdp_cases: usize, max_bids: usize) -> Result<CheckReport> {
    let market = MarketConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport {
        bidder_cases,
        wdp_cases,
        ..CheckReport::default()
    };
    for _ in 0..bidder_cases {
        let profile = random_profile(&mut rng, &market);
        let p_spectrum = rng.gen_range(0.0..15.0);
        let p_antenna = rng.gen_range(0.0..2_000.0);
        let fast = optimal_package(&profile, p_spectrum, p_antenna, &market)?;
        let slow = exhaustive_package(&profile, p_spectrum, p_antenna, &market)?;
        if fast.cost != slow.cost || fast.antennas != slow.antennas {
            report.bidder_mismatches += 1;
        }
    }
    for _ in 0..wdp_cases {
        let instance = random_wdp_instance(&mut rng, max_bids);
        let exact = brute_force_wdp(&instance)?;
        let found = solve_wdp(&instance, None);
        if found.revenue != exact.revenue {
            report.wdp_revenue_mismatches += 1;
        } else if found.winning_bids != exact.winning_bids {
            report.wdp_winner_mismatches += 1;
        }
    }
    Ok(report)
}
