//! Experiment grid over (minimum rate x antenna fee).
//!
//! Every cell instantiates the bidder roster at the row's rate, charges
//! `alpha * value_per_kbps` per antenna, and runs one full auction. Cells are
//! independent and run in parallel; results are always stored row-major.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;

use crate::auction::run_auction;
use crate::bidder::BidderTemplate;
use crate::config::{RunConfig, SweepAxes};
use crate::error::{MarketError, Result};
use crate::market::MarketConfig;
use crate::metrics::{AuctionOutcome, OUTCOME_COLUMNS};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Kbps, strictly increasing.
    pub rate_axis: Vec<f64>,
    /// Multiples of value_per_kbps, strictly increasing.
    pub antenna_cost_axis: Vec<f64>,
    pub base_market: MarketConfig,
    pub base_bidder: BidderTemplate,
    pub time_budget: Option<Duration>,
}

impl SweepSpec {
    pub fn from_config(config: &RunConfig) -> Result<Self> {
        let SweepAxes {
            rate_axis,
            antenna_cost_axis,
        } = config
            .sweep
            .clone()
            .ok_or_else(|| MarketError::config("configuration has no [sweep] section"))?;
        let spec = SweepSpec {
            rate_axis,
            antenna_cost_axis,
            base_market: config.market.clone(),
            base_bidder: config.bidder.clone(),
            time_budget: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, axis) in [
            ("rate_axis", &self.rate_axis),
            ("antenna_cost_axis", &self.antenna_cost_axis),
        ] {
            if axis.is_empty() {
                return Err(MarketError::config(format!("{name} is empty")));
            }
            if axis.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(MarketError::config(format!("{name} has a negative or non-finite value")));
            }
            if axis.windows(2).any(|w| w[0] >= w[1]) {
                return Err(MarketError::config(format!("{name} is not strictly increasing")));
            }
        }
        self.base_market.validate()
    }

    pub fn p_antenna(&self, alpha: f64) -> f64 {
        alpha * self.base_bidder.value_per_kbps
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub r_min: f64,
    pub alpha: f64,
    pub rounds: usize,
    pub outcome: AuctionOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub rate_axis: Vec<f64>,
    pub antenna_cost_axis: Vec<f64>,
    /// Row-major: `cells[i * cols + j]` is rate `i`, antenna cost `j`.
    pub cells: Vec<CellResult>,
}

impl SweepGrid {
    pub fn rows(&self) -> usize {
        self.rate_axis.len()
    }

    pub fn cols(&self) -> usize {
        self.antenna_cost_axis.len()
    }

    pub fn cell(&self, row: usize, col: usize) -> &CellResult {
        &self.cells[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[CellResult] {
        let cols = self.cols();
        &self.cells[row * cols..(row + 1) * cols]
    }

    /// One metric as a rows x cols matrix.
    pub fn matrix(&self, metric: impl Fn(&AuctionOutcome) -> f64) -> Vec<Vec<f64>> {
        (0..self.rows())
            .map(|i| self.row(i).iter().map(|c| metric(&c.outcome)).collect())
            .collect()
    }
}

/// Runs one auction; the clock's structural invariants are re-checked
/// before the cell is accepted.
pub fn run_cell(spec: &SweepSpec, r_min: f64, alpha: f64) -> Result<CellResult> {
    let market = &spec.base_market;
    let roster = spec.base_bidder.with_rate(r_min).roster(market)?;
    let run = run_auction(market, &roster, spec.p_antenna(alpha), spec.time_budget)?;
    run.clock.check_invariants(market)?;
    Ok(CellResult {
        r_min,
        alpha,
        rounds: run.clock.rounds().len(),
        outcome: run.outcome,
    })
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepGrid> {
    spec.validate()?;
    let coords: Vec<(f64, f64)> = spec
        .rate_axis
        .iter()
        .flat_map(|&r| spec.antenna_cost_axis.iter().map(move |&a| (r, a)))
        .collect();
    let cells = coords
        .par_iter()
        .map(|&(r_min, alpha)| {
            run_cell(spec, r_min, alpha).map_err(|e| MarketError::Cell {
                r_min,
                alpha,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid {
        rate_axis: spec.rate_axis.clone(),
        antenna_cost_axis: spec.antenna_cost_axis.clone(),
        cells,
    })
}

pub const LONG_FORM_FILE: &str = "sweep_long.csv";

/// Matrix files written by [`emit_matrices`], one per figure metric.
pub const MATRIX_FILES: [&str; 6] = [
    "combined_revenue.csv",
    "winner_count.csv",
    "antenna_revenue.csv",
    "mean_antennas.csv",
    "mean_bandwidth.csv",
    "spectrum_price.csv",
];

type Metric = fn(&AuctionOutcome) -> String;

const MATRIX_METRICS: [Metric; 6] = [
    |o| o.combined_revenue.to_string(),
    |o| o.num_winners.to_string(),
    |o| o.antenna_revenue.to_string(),
    |o| o.mean_antennas.to_string(),
    |o| o.mean_bandwidth.to_string(),
    |o| o.clearing_spectrum_price.to_string(),
];

pub fn long_form_header() -> Vec<&'static str> {
    let mut header = vec!["r_min_kbps", "alpha", "rounds"];
    header.extend(OUTCOME_COLUMNS);
    header
}

/// All metrics, one row per cell, row-major.
pub fn write_long_form<W: Write>(grid: &SweepGrid, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(long_form_header())?;
    for cell in &grid.cells {
        let mut record = vec![
            cell.r_min.to_string(),
            cell.alpha.to_string(),
            cell.rounds.to_string(),
        ];
        record.extend(cell.outcome.csv_row());
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

fn write_matrix<W: Write>(grid: &SweepGrid, metric: Metric, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["r_min_kbps\\alpha".to_string()];
    header.extend(grid.antenna_cost_axis.iter().map(|a| a.to_string()));
    w.write_record(&header)?;
    for (i, r) in grid.rate_axis.iter().enumerate() {
        let mut record = vec![r.to_string()];
        record.extend(grid.row(i).iter().map(|c| metric(&c.outcome)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the six metric matrices plus the long-form CSV into `out_dir`.
pub fn emit_matrices(grid: &SweepGrid, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|source| MarketError::Io {
        path: out_dir.to_owned(),
        source,
    })?;
    let create = |path: &Path| {
        File::create(path).map_err(|source| MarketError::Io {
            path: path.to_owned(),
            source,
        })
    };
    let csv_err = |path: &Path| {
        let path = path.to_owned();
        move |source| MarketError::Csv { path, source }
    };

    let mut written = Vec::with_capacity(MATRIX_FILES.len() + 1);
    let long = out_dir.join(LONG_FORM_FILE);
    write_long_form(grid, create(&long)?).map_err(csv_err(&long))?;
    written.push(long);
    for (name, metric) in MATRIX_FILES.iter().zip(MATRIX_METRICS) {
        let path = out_dir.join(name);
        write_matrix(grid, metric, create(&path)?).map_err(csv_err(&path))?;
        written.push(path);
    }
    Ok(written)
}
