//! Winner determination for the bids that stood at the last excess-demand
//! price.
//!
//! Each bid is a package; winners receive disjoint spectrum blocks and share
//! the antenna pool, so the only constraint is the total spectrum. The
//! objective is combined antenna+spectrum revenue at the round's prices.
//!
//! Among equal-revenue allocations we prefer more winners, then the
//! lexicographically smallest sorted list of bidder ids. Both solvers here
//! compute revenue from integer bandwidth and antenna totals, so they agree
//! bit for bit and the tie-break is well defined.

use std::cmp::Ordering;
use std::io::Read;
use std::path::Path;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bidder::{BidderId, Package, PackageBid};
use crate::clock::RoundRecord;
use crate::error::{MarketError, Result};

/// Exhaustive enumeration is refused above this many bids.
pub const BRUTE_FORCE_MAX_BIDS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct WdpInstance {
    pub bids: Vec<PackageBid>,
    /// kHz.
    pub total_spectrum: u64,
    pub p_spectrum: f64,
    pub p_antenna: f64,
}

impl WdpInstance {
    pub fn from_round(round: &RoundRecord, total_spectrum: u64) -> Self {
        WdpInstance {
            bids: round.bids.clone(),
            total_spectrum,
            p_spectrum: round.p_spectrum,
            p_antenna: round.p_antenna,
        }
    }

    /// Revenue of any bid set with the given bandwidth and antenna totals.
    pub fn revenue(&self, bandwidth: u64, antennas: u64) -> f64 {
        self.p_spectrum * bandwidth as f64 + self.p_antenna * antennas as f64
    }

    /// Allocation awarding the bids at `indices` (any order).
    pub fn allocation(&self, indices: &[usize], optimal: bool) -> Allocation {
        let mut winners: Vec<(BidderId, usize)> =
            indices.iter().map(|&i| (self.bids[i].bidder_id, i)).collect();
        winners.sort_unstable();
        let winning_bids: Vec<PackageBid> = winners.iter().map(|&(_, i)| self.bids[i]).collect();
        let spectrum_used = winning_bids.iter().map(|b| b.package.bandwidth).sum();
        let antennas = winning_bids.iter().map(|b| u64::from(b.package.antennas)).sum();
        Allocation {
            revenue: self.revenue(spectrum_used, antennas),
            winning_bids,
            spectrum_used,
            optimal,
        }
    }

    pub fn from_csv_reader<R: Read>(
        reader: R,
        total_spectrum: u64,
        p_spectrum: f64,
        p_antenna: f64,
    ) -> csv::Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let bids = rdr
            .deserialize::<BidRow>()
            .map(|row| {
                row.map(|r| PackageBid {
                    bidder_id: BidderId(r.bidder_id),
                    package: Package::priced(r.antennas, r.bandwidth_khz, p_spectrum, p_antenna),
                    round_index: 0,
                })
            })
            .collect::<csv::Result<Vec<_>>>()?;
        Ok(WdpInstance {
            bids,
            total_spectrum,
            p_spectrum,
            p_antenna,
        })
    }

    /// Reads a bid list with header `bidder_id,antennas,bandwidth_khz`.
    pub fn from_csv_path(
        path: &Path,
        total_spectrum: u64,
        p_spectrum: f64,
        p_antenna: f64,
    ) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| MarketError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_csv_reader(file, total_spectrum, p_spectrum, p_antenna).map_err(|source| {
            MarketError::Csv {
                path: path.to_owned(),
                source,
            }
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BidRow {
    bidder_id: u32,
    antennas: u32,
    bandwidth_khz: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    /// Sorted by bidder id.
    pub winning_bids: Vec<PackageBid>,
    /// kHz.
    pub spectrum_used: u64,
    pub revenue: f64,
    /// False when an anytime cutoff stopped the search early.
    pub optimal: bool,
}

impl Allocation {
    pub fn empty(optimal: bool) -> Self {
        Allocation {
            winning_bids: Vec::new(),
            spectrum_used: 0,
            revenue: 0.0,
            optimal,
        }
    }

    pub fn num_winners(&self) -> usize {
        self.winning_bids.len()
    }

    pub fn winner_ids(&self) -> Vec<BidderId> {
        self.winning_bids.iter().map(|b| b.bidder_id).collect()
    }
}

/// Stops an anytime search. Either bound may be absent.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SearchLimit {
    pub time: Option<Duration>,
    pub max_nodes: Option<u64>,
}

impl SearchLimit {
    pub fn unlimited() -> Self {
        SearchLimit::default()
    }

    pub fn time(budget: Duration) -> Self {
        SearchLimit {
            time: Some(budget),
            max_nodes: None,
        }
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchLimit {
            time: None,
            max_nodes: Some(max_nodes),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub allocation: Allocation,
    pub nodes: u64,
    /// Revenue of each successive incumbent, starting with the empty set.
    pub incumbents: Vec<f64>,
}

pub fn solve_wdp(instance: &WdpInstance, time_budget: Option<Duration>) -> Allocation {
    let limit = SearchLimit {
        time: time_budget,
        max_nodes: None,
    };
    solve_wdp_with(instance, limit).allocation
}

/// Depth-first branch-on-bids with include-first branching.
///
/// Bids are ordered by revenue per kHz (descending). Identical packages sit
/// next to each other in id order and may only be taken as a prefix, which
/// removes the symmetric duplicates that dominate homogeneous markets.
pub fn solve_wdp_with(instance: &WdpInstance, limit: SearchLimit) -> SearchReport {
    let mut search = Search::new(instance, limit);
    search.descend(0, 0, 0, false);
    let optimal = !search.stopped;
    let best: Vec<usize> = search.best.indices.iter().map(|&pos| search.order[pos]).collect();
    SearchReport {
        allocation: instance.allocation(&best, optimal),
        nodes: search.nodes,
        incumbents: search.incumbents,
    }
}

#[derive(Debug, Clone)]
struct Incumbent {
    revenue: f64,
    /// Sorted (bidder id, bid index) keys.
    keys: Vec<(BidderId, usize)>,
    /// Positions in branching order.
    indices: Vec<usize>,
}

/// Total order on candidate allocations: higher revenue, then more
/// winners, then the lexicographically smaller id list.
fn better(revenue: f64, keys: &[(BidderId, usize)], than: &Incumbent) -> bool {
    match revenue.partial_cmp(&than.revenue) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Less) | None => false,
        Some(Ordering::Equal) => match keys.len().cmp(&than.keys.len()) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => keys < than.keys.as_slice(),
        },
    }
}

struct Search<'a> {
    instance: &'a WdpInstance,
    limit: SearchLimit,
    started: Instant,
    order: Vec<usize>,
    /// `same_as_prev[d]`: bid at position d has the same package as d - 1.
    same_as_prev: Vec<bool>,
    chosen: Vec<usize>,
    best: Incumbent,
    incumbents: Vec<f64>,
    nodes: u64,
    stopped: bool,
}

impl<'a> Search<'a> {
    fn new(instance: &'a WdpInstance, limit: SearchLimit) -> Self {
        let bids = &instance.bids;
        let density = |i: usize| {
            let p = &bids[i].package;
            let revenue = instance.revenue(p.bandwidth, u64::from(p.antennas));
            if p.bandwidth == 0 {
                f64::INFINITY
            } else {
                revenue / p.bandwidth as f64
            }
        };
        let mut order: Vec<usize> = (0..bids.len()).collect();
        order.sort_by(|&a, &b| {
            let (pa, pb) = (&bids[a].package, &bids[b].package);
            density(b)
                .total_cmp(&density(a))
                .then(pa.bandwidth.cmp(&pb.bandwidth))
                .then(pa.antennas.cmp(&pb.antennas))
                .then(bids[a].bidder_id.cmp(&bids[b].bidder_id))
                .then(a.cmp(&b))
        });
        let same_as_prev = (0..order.len())
            .map(|d| {
                d > 0 && {
                    let (p, q) = (&bids[order[d - 1]].package, &bids[order[d]].package);
                    p.bandwidth == q.bandwidth && p.antennas == q.antennas
                }
            })
            .collect();
        Search {
            instance,
            limit,
            started: Instant::now(),
            order,
            same_as_prev,
            chosen: Vec::new(),
            best: Incumbent {
                revenue: 0.0,
                keys: Vec::new(),
                indices: Vec::new(),
            },
            incumbents: vec![0.0],
            nodes: 0,
            stopped: false,
        }
    }

    fn package(&self, pos: usize) -> &Package {
        &self.instance.bids[self.order[pos]].package
    }

    fn out_of_budget(&mut self) -> bool {
        if self.stopped {
            return true;
        }
        if let Some(max) = self.limit.max_nodes {
            if self.nodes >= max {
                self.stopped = true;
            }
        }
        if let Some(budget) = self.limit.time {
            if self.nodes.is_multiple_of(256) && self.started.elapsed() >= budget {
                self.stopped = true;
            }
        }
        self.stopped
    }

    fn descend(&mut self, depth: usize, bandwidth: u64, antennas: u64, prev_excluded: bool) {
        if self.out_of_budget() {
            return;
        }
        self.nodes += 1;

        let remaining = self.instance.total_spectrum - bandwidth;
        let (mut bound_bw, mut bound_ant, mut bound_count) = (bandwidth, antennas, self.chosen.len());
        // Identical packages right after an excluded one are forced out.
        let mut forced = prev_excluded;
        for pos in depth..self.order.len() {
            forced &= self.same_as_prev[pos];
            let p = self.package(pos);
            if !forced && p.bandwidth <= remaining {
                bound_bw += p.bandwidth;
                bound_ant += u64::from(p.antennas);
                bound_count += 1;
            }
        }
        let bound = self.instance.revenue(bound_bw, bound_ant);
        if bound < self.best.revenue
            || (bound == self.best.revenue && bound_count < self.best.keys.len())
        {
            return;
        }

        if depth == self.order.len() {
            self.offer(bandwidth, antennas);
            return;
        }

        // An identical package whose predecessor was left out must be left
        // out too; otherwise a lower id could replace it at no cost.
        let forced_out = self.same_as_prev[depth] && prev_excluded;
        let p = *self.package(depth);
        if !forced_out && p.bandwidth <= remaining {
            self.chosen.push(depth);
            self.descend(depth + 1, bandwidth + p.bandwidth, antennas + u64::from(p.antennas), false);
            self.chosen.pop();
        }
        self.descend(depth + 1, bandwidth, antennas, true);
    }

    fn offer(&mut self, bandwidth: u64, antennas: u64) {
        let revenue = self.instance.revenue(bandwidth, antennas);
        let mut keys: Vec<(BidderId, usize)> = self
            .chosen
            .iter()
            .map(|&pos| {
                let i = self.order[pos];
                (self.instance.bids[i].bidder_id, i)
            })
            .collect();
        keys.sort_unstable();
        if better(revenue, &keys, &self.best) {
            self.best = Incumbent {
                revenue,
                keys,
                indices: self.chosen.clone(),
            };
            self.incumbents.push(revenue);
        }
    }
}

/// Exact optimum by enumerating every subset. Test oracle.
pub fn brute_force_wdp(instance: &WdpInstance) -> Result<Allocation> {
    let n = instance.bids.len();
    if n > BRUTE_FORCE_MAX_BIDS {
        return Err(MarketError::InstanceTooLarge {
            bids: n,
            limit: BRUTE_FORCE_MAX_BIDS,
        });
    }
    let mut best = Incumbent {
        revenue: 0.0,
        keys: Vec::new(),
        indices: Vec::new(),
    };
    for mask in 0u32..(1u32 << n) {
        let members = || (0..n).filter(move |i| mask & (1 << i) != 0);
        let bandwidth: u64 = members().map(|i| instance.bids[i].package.bandwidth).sum();
        if bandwidth > instance.total_spectrum {
            continue;
        }
        let antennas: u64 = members()
            .map(|i| u64::from(instance.bids[i].package.antennas))
            .sum();
        let revenue = instance.revenue(bandwidth, antennas);
        if revenue < best.revenue {
            continue;
        }
        let mut keys: Vec<(BidderId, usize)> =
            members().map(|i| (instance.bids[i].bidder_id, i)).collect();
        keys.sort_unstable();
        if better(revenue, &keys, &best) {
            best = Incumbent {
                revenue,
                keys,
                indices: members().collect(),
            };
        }
    }
    Ok(instance.allocation(&best.indices, true))
}
