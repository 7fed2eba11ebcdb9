use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use cran_market::config::RunConfig;
use cran_market::selfcheck::run_self_check;
use cran_market::sweep::{emit_matrices, run_sweep, SweepSpec};
use cran_market::wdp::{brute_force_wdp, solve_wdp, WdpInstance};
use cran_market::{clock, run_auction};

#[derive(Parser)]
#[command(name = "cran-market", version, about = "Antenna + spectrum clock auction simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single auction and print its outcome.
    Run(RunArgs),
    /// Sweep the (minimum rate x antenna cost) grid and write matrices.
    Sweep(SweepArgs),
    /// Solve a standalone winner-determination instance.
    Wdp(WdpArgs),
    /// Check the optimisers against their exhaustive oracles.
    Check(CheckArgs),
}

#[derive(Args)]
struct Common {
    /// TOML configuration; the bundled defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides market.rng_seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Wall-clock budget for the anytime winner determination.
    #[arg(long)]
    time_budget_ms: Option<u64>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

impl Common {
    fn load(&self) -> anyhow::Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::from_path(path)?,
            None => RunConfig::default_config(),
        };
        if let Some(seed) = self.seed {
            config.market.rng_seed = seed;
        }
        Ok(config)
    }

    fn time_budget(&self) -> Option<Duration> {
        self.time_budget_ms.map(Duration::from_millis)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Antenna fee as a multiple of value_per_kbps.
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Overrides bidder.r_min (Kbps).
    #[arg(long)]
    r_min: Option<f64>,
    /// Write the per-round trace to <out-dir>/trace.csv.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct WdpArgs {
    /// CSV with header bidder_id,antennas,bandwidth_khz.
    instance: PathBuf,
    /// kHz.
    #[arg(long)]
    total_spectrum: u64,
    #[arg(long)]
    p_spectrum: f64,
    #[arg(long)]
    p_antenna: f64,
    #[arg(long)]
    time_budget_ms: Option<u64>,
    /// Use exhaustive enumeration instead of the search.
    #[arg(long)]
    brute_force: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    bidder_cases: usize,
    #[arg(long, default_value_t = 1_000)]
    wdp_cases: usize,
    #[arg(long, default_value_t = 15)]
    max_bids: usize,
}

fn run(args: RunArgs) -> anyhow::Result<()> {
    let mut config = args.common.load()?;
    if let Some(r) = args.r_min {
        config.bidder.r_min = r;
    }
    let roster = config.bidder.roster(&config.market)?;
    let p_antenna = args.alpha * config.bidder.value_per_kbps;
    let run = run_auction(&config.market, &roster, p_antenna, args.common.time_budget())?;
    let o = &run.outcome;
    println!("rounds                   {}", run.clock.rounds().len());
    println!("oversupply               {}", run.clock.oversupply());
    println!("num_winners              {}", o.num_winners);
    println!("winners                  {:?}", o.allocation.winner_ids().iter().map(|id| id.0).collect::<Vec<_>>());
    println!("clearing_spectrum_price  {}", o.clearing_spectrum_price);
    println!("p_antenna                {}", o.p_antenna);
    println!("combined_revenue         {}", o.combined_revenue);
    println!("antenna_revenue          {}", o.antenna_revenue);
    println!("spectrum_revenue         {}", o.spectrum_revenue);
    println!("mean_antennas            {}", o.mean_antennas);
    println!("mean_bandwidth_khz       {}", o.mean_bandwidth);
    println!("wdp_optimal              {}", o.allocation.optimal);
    if args.trace {
        std::fs::create_dir_all(&args.common.out_dir)?;
        let path = args.common.out_dir.join("trace.csv");
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        clock::write_trace(&run.clock, file).with_context(|| format!("writing {}", path.display()))?;
        println!("trace                    {}", path.display());
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> anyhow::Result<()> {
    let config = args.common.load()?;
    let mut spec = SweepSpec::from_config(&config)?;
    spec.time_budget = args.common.time_budget();
    let grid = run_sweep(&spec)?;
    for path in emit_matrices(&grid, &args.common.out_dir)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn wdp(args: WdpArgs) -> anyhow::Result<()> {
    let instance = WdpInstance::from_csv_path(&args.instance, args.total_spectrum, args.p_spectrum, args.p_antenna)?;
    let allocation = if args.brute_force {
        brute_force_wdp(&instance)?
    } else {
        solve_wdp(&instance, args.time_budget_ms.map(Duration::from_millis))
    };
    println!("winners        {:?}", allocation.winner_ids().iter().map(|id| id.0).collect::<Vec<_>>());
    println!("spectrum_used  {}", allocation.spectrum_used);
    println!("revenue        {}", allocation.revenue);
    println!("optimal        {}", allocation.optimal);
    Ok(())
}

fn check(args: CheckArgs) -> anyhow::Result<bool> {
    if args.max_bids > cran_market::wdp::BRUTE_FORCE_MAX_BIDS {
        bail!("--max-bids above {} is not enumerable", cran_market::wdp::BRUTE_FORCE_MAX_BIDS);
    }
    let report = run_self_check(args.seed, args.bidder_cases, args.wdp_cases, args.max_bids)?;
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    println!(
        "[{}] bidder optimiser vs exhaustive scan: {} cases, {} mismatches",
        verdict(report.bidder_mismatches == 0),
        report.bidder_cases,
        report.bidder_mismatches
    );
    println!(
        "[{}] winner determination vs enumeration: {} cases, {} revenue / {} winner-set mismatches",
        verdict(report.wdp_revenue_mismatches == 0 && report.wdp_winner_mismatches == 0),
        report.wdp_cases,
        report.wdp_revenue_mismatches,
        report.wdp_winner_mismatches
    );
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a).map(|_| true),
        Command::Sweep(a) => sweep(a).map(|_| true),
        Command::Wdp(a) => wdp(a).map(|_| true),
        Command::Check(a) => check(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
