//! Combined allocation of shared cloud-RAN antennas and orthogonal spectrum
//! to virtual network operators.
//!
//! Antennas are non-rival and sold at a fixed per-antenna fee; spectrum is
//! sold through an ascending clock auction. Each bidder answers every posted
//! price with the cheapest antenna/spectrum package that meets its rate
//! requirement. When the clock overshoots, the bids that stood at the last
//! excess-demand price are resolved by a branch-on-bids winner
//! determination search.
//!
//! The [`sweep`] module reproduces the experiment grid over minimum rate and
//! antenna fee.

pub mod auction;
pub mod bidder;
pub mod clock;
pub mod config;
pub mod error;
pub mod market;
pub mod metrics;
pub mod oracle;
pub mod selfcheck;
pub mod sweep;
pub mod wdp;

pub use auction::{run_auction, AuctionRun};
pub use bidder::{decide_bid, optimal_package, BidderId, BidderProfile, BidderTemplate, Package, PackageBid};
pub use clock::{detect_excess, run_clock_phase, ClockResult, RoundRecord};
pub use config::RunConfig;
pub use error::{MarketError, Result};
pub use market::{MarketConfig, RateModel};
pub use metrics::{summarize, AuctionOutcome};
pub use sweep::{emit_matrices, run_sweep, CellResult, SweepGrid, SweepSpec};
pub use wdp::{brute_force_wdp, solve_wdp, Allocation, WdpInstance};
