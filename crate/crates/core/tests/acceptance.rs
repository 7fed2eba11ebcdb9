//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cran_market::oracle::exhaustive_package;
use cran_market::selfcheck::{random_profile, random_wdp_instance};
use cran_market::sweep::write_long_form;
use cran_market::{brute_force_wdp, optimal_package, run_sweep, solve_wdp, MarketConfig, RunConfig, SweepGrid, SweepSpec};

const BANDWIDTH_RATIO_TARGET: f64 = 0.5196;
const BANDWIDTH_RATIO_TOL: f64 = 0.01;
const BIDDER_CASES: usize = 10_000;
const BIDDER_TIME_LIMIT: Duration = Duration::from_secs(10);
const WDP_CASES: usize = 1_000;
const WDP_MAX_BIDS: usize = 15;
const WDP_TIME_LIMIT: Duration = Duration::from_secs(60);
const SWEEP_TIME_LIMIT: Duration = Duration::from_secs(300);
const MIN_GRID_SIDE: usize = 10;
const ROBUSTNESS_INCREMENTS: [f64; 2] = [0.005, 0.02];
/// Combined revenue may rise by at most one clock tick on the winners'
/// spectrum: `n * price_increment * mean_bandwidth`.
const COMBINED_TICK_TOLERANCE: f64 = 1.0;

struct Suite {
    failures: usize,
}

impl Suite {
    fn report(&mut self, id: &str, ok: bool, detail: impl AsRef<str>) {
        if !ok {
            self.failures += 1;
        }
        println!("[{}] {id}: {}", if ok { "PASS" } else { "FAIL" }, detail.as_ref());
    }
}

fn default_spec() -> SweepSpec {
    SweepSpec::from_config(&RunConfig::default_config()).expect("default sweep is valid")
}

fn single_threaded_sweep(spec: &SweepSpec) -> (cran_market::Result<SweepGrid>, Duration) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let start = Instant::now();
    let grid = pool.install(|| run_sweep(spec));
    (grid, start.elapsed())
}

fn bandwidth_ratio(s: &mut Suite) {
    let market = MarketConfig::default();
    let model = market.rate_model();
    let mut worst: f64 = 0.0;
    for r in [1_000.0, 100_000.0, 345_940.0] {
        let ratio = model.continuous_bandwidth(r, 10).unwrap() / model.continuous_bandwidth(r, 1).unwrap();
        worst = worst.max((ratio - BANDWIDTH_RATIO_TARGET).abs());
    }
    let ratio = model.continuous_bandwidth(1_000.0, 10).unwrap() / model.continuous_bandwidth(1_000.0, 1).unwrap();
    s.report(
        "C1 bandwidth ratio m=10 vs m=1",
        worst <= BANDWIDTH_RATIO_TOL,
        format!("ratio {ratio:.6}, target {BANDWIDTH_RATIO_TARGET} +/- {BANDWIDTH_RATIO_TOL}"),
    );
}

fn bidder_oracle(s: &mut Suite) {
    let market = MarketConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xB1D);
    let start = Instant::now();
    let mut mismatches = 0;
    for _ in 0..BIDDER_CASES {
        let profile = random_profile(&mut rng, &market);
        let ps = rng.gen_range(0.0..15.0);
        let pa = rng.gen_range(0.0..2_000.0);
        let fast = optimal_package(&profile, ps, pa, &market).unwrap();
        let slow = exhaustive_package(&profile, ps, pa, &market).unwrap();
        if fast.cost != slow.cost || fast.antennas != slow.antennas {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    s.report(
        "C2 bidder optimum vs exhaustive scan",
        mismatches == 0 && elapsed < BIDDER_TIME_LIMIT,
        format!("{BIDDER_CASES} cases, {mismatches} mismatches, {:.2}s", elapsed.as_secs_f64()),
    );
}

fn wdp_oracle(s: &mut Suite) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3D9);
    let start = Instant::now();
    let (mut revenue, mut winners) = (0, 0);
    for _ in 0..WDP_CASES {
        let inst = random_wdp_instance(&mut rng, WDP_MAX_BIDS);
        let exact = brute_force_wdp(&inst).unwrap();
        let found = solve_wdp(&inst, None);
        if found.revenue != exact.revenue {
            revenue += 1;
        }
        if found.winning_bids != exact.winning_bids {
            winners += 1;
        }
    }
    let elapsed = start.elapsed();
    s.report(
        "C3 winner determination vs enumeration",
        revenue == 0 && winners == 0 && elapsed < WDP_TIME_LIMIT,
        format!(
            "{WDP_CASES} cases, {revenue} revenue / {winners} winner-set mismatches, {:.2}s",
            elapsed.as_secs_f64()
        ),
    );
}

/// Violation counts for the grid trend properties.
#[derive(Default)]
struct Trends {
    winners_vs_rate: usize,
    winners_vs_alpha: usize,
    antenna_revenue: usize,
    /// (r_min, alpha, revenue, revenue at the next alpha)
    first_antenna_drop: Option<(f64, f64, f64, f64)>,
    spectrum_price: usize,
    antennas: usize,
    bandwidth: usize,
    rows_without_drop: usize,
    combined_ticks: usize,
    combined_exact: usize,
}

fn trends(grid: &SweepGrid, market: &MarketConfig) -> Trends {
    let mut t = Trends::default();
    let (rows, cols) = (grid.rows(), grid.cols());
    let full = f64::from(market.total_antennas);
    for i in 0..rows {
        let mut dropped = false;
        // Plateau: while winners hold the whole pool their bandwidth is the
        // full-pool requirement.
        let first = &grid.cell(i, 0).outcome;
        if grid.antenna_cost_axis[0] == 0.0 && first.num_winners > 0 && first.mean_antennas != full {
            t.antennas += 1;
        }
        for j in 0..cols {
            let here = &grid.cell(i, j).outcome;
            if here.num_winners > 0 && here.mean_antennas == full && here.mean_bandwidth != first.mean_bandwidth {
                t.bandwidth += 1;
            }
            if i + 1 < rows && grid.cell(i + 1, j).outcome.num_winners > here.num_winners {
                t.winners_vs_rate += 1;
            }
            if j + 1 == cols {
                continue;
            }
            let next = &grid.cell(i, j + 1).outcome;
            if next.num_winners > here.num_winners {
                t.winners_vs_alpha += 1;
            }
            dropped |= next.num_winners < here.num_winners;
            if next.antenna_revenue < here.antenna_revenue {
                t.antenna_revenue += 1;
                let c = grid.cell(i, j);
                t.first_antenna_drop
                    .get_or_insert((c.r_min, c.alpha, here.antenna_revenue, next.antenna_revenue));
            }
            if next.clearing_spectrum_price > here.clearing_spectrum_price {
                t.spectrum_price += 1;
            }
            if next.num_winners > 0 && next.mean_antennas > here.mean_antennas {
                t.antennas += 1;
            }
            if next.num_winners > 0 && next.mean_bandwidth < here.mean_bandwidth {
                t.bandwidth += 1;
            }
        }
        if !dropped {
            t.rows_without_drop += 1;
            continue;
        }
        for j in 0..cols - 1 {
            let (here, next) = (&grid.cell(i, j).outcome, &grid.cell(i, j + 1).outcome);
            let tick = COMBINED_TICK_TOLERANCE * next.num_winners as f64 * market.price_increment * next.mean_bandwidth;
            if next.combined_revenue > here.combined_revenue + tick {
                t.combined_ticks += 1;
            }
            if next.combined_revenue > here.combined_revenue {
                t.combined_exact += 1;
            }
        }
    }
    t
}

fn long_form(grid: &SweepGrid) -> Vec<u8> {
    let mut bytes = Vec::new();
    write_long_form(grid, &mut bytes).unwrap();
    bytes
}

fn main() -> ExitCode {
    let mut s = Suite { failures: 0 };

    bandwidth_ratio(&mut s);
    bidder_oracle(&mut s);
    wdp_oracle(&mut s);

    let spec = default_spec();
    let (grid, elapsed) = single_threaded_sweep(&spec);
    let grid = match grid {
        Ok(g) => g,
        Err(e) => {
            s.report("C4 clock invariants on the default grid", false, e.to_string());
            println!("C5 to C8 not run; {} criteria failed", s.failures);
            return ExitCode::FAILURE;
        }
    };
    let max_rounds = grid.cells.iter().map(|c| c.rounds).max().unwrap_or(0);
    s.report(
        "C4 clock invariants on the default grid",
        true,
        format!(
            "{} cells halted with exact price steps and monotone demand, at most {max_rounds} rounds",
            grid.cells.len()
        ),
    );

    let m = &spec.base_market;
    let t = trends(&grid, m);
    let shape_ok = grid.rows() >= MIN_GRID_SIDE
        && grid.cols() >= MIN_GRID_SIDE
        && m.num_bidders == 20
        && m.total_antennas == 64
        && m.total_spectrum == 50_000;
    let antenna_detail = |count: usize| match t.first_antenna_drop {
        Some((r, a, before, after)) => format!("{count} violations, first at r_min {r} alpha {a}: {before} -> {after}"),
        None => format!("{count} violations"),
    };
    let c5 = [
        ("winners vs rate", t.winners_vs_rate),
        ("winners vs alpha", t.winners_vs_alpha),
        ("antenna revenue", t.antenna_revenue),
        ("spectrum price", t.spectrum_price),
        ("mean antennas", t.antennas),
        ("mean bandwidth", t.bandwidth),
    ];
    for (name, count) in c5 {
        let detail = if name == "antenna revenue" {
            antenna_detail(count)
        } else {
            format!("{count} violations")
        };
        s.report(&format!("C5 trend: {name}"), count == 0, detail);
    }
    s.report(
        "C5 grid shape and single-threaded runtime",
        shape_ok && elapsed < SWEEP_TIME_LIMIT,
        format!("{}x{} grid in {:.2}s", grid.rows(), grid.cols(), elapsed.as_secs_f64()),
    );

    s.report(
        "C6 winner count drops on every rate row",
        t.rows_without_drop == 0,
        format!("{} of {} rows without a drop", t.rows_without_drop, grid.rows()),
    );

    s.report(
        "C7 combined revenue non-increasing on rows with a drop",
        t.combined_ticks == 0,
        format!(
            "{} rises beyond one clock tick ({} rises of any size)",
            t.combined_ticks, t.combined_exact
        ),
    );
    s.report(
        "C7 antenna revenue non-decreasing on rows with a drop",
        t.antenna_revenue == 0,
        antenna_detail(t.antenna_revenue),
    );

    let mut robust = Vec::new();
    for inc in ROBUSTNESS_INCREMENTS {
        let mut alt = spec.clone();
        alt.base_market.price_increment = inc;
        let t = trends(&run_sweep(&alt).unwrap(), &alt.base_market);
        let others = t.winners_vs_rate + t.winners_vs_alpha + t.spectrum_price + t.antennas + t.bandwidth;
        robust.push((inc, others + t.rows_without_drop + t.combined_ticks, t.antenna_revenue));
    }
    s.report(
        "C5 trends hold at other price increments",
        robust.iter().all(|&(_, v, _)| v == 0),
        robust
            .iter()
            .map(|(inc, v, a)| format!("increment {inc}: {v} violations outside antenna revenue, {a} antenna revenue"))
            .collect::<Vec<_>>()
            .join("; "),
    );

    let (again, _) = single_threaded_sweep(&spec);
    let parallel = run_sweep(&spec);
    let first = long_form(&grid);
    let same = matches!(&again, Ok(g) if long_form(g) == first) && matches!(&parallel, Ok(g) if long_form(g) == first);
    let mut jitter = spec.clone();
    jitter.base_bidder.rate_jitter = 0.3;
    jitter.base_market.rng_seed = 7;
    let jitter_same = long_form(&run_sweep(&jitter).unwrap()) == long_form(&run_sweep(&jitter).unwrap());
    s.report(
        "C8 reruns give byte-identical long-form output",
        same && jitter_same,
        format!("{} bytes, default and jittered rosters", first.len()),
    );

    if s.failures == 0 {
        println!("all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", s.failures);
        ExitCode::FAILURE
    }
}
