//! CSV report rows, flushed one at a time so interrupted runs keep what
//! they finished.

use std::io::Write;
use std::time::Instant;

use cubelab_core::stats::Estimate;
use cubelab_core::{Error, Result, ROUNDING_POLICY, VERSION};
use serde::Serialize;

/// Column order of every report.
pub const COLUMNS: [&str; 12] =
    ["experiment", "n", "eps", "seed", "statistic", "value", "ci_lo", "ci_hi", "trials", "wall_ms", "version", "rounding"];

#[derive(Serialize)]
struct Row<'a> {
    experiment: &'a str,
    n: usize,
    eps: f64,
    seed: u64,
    statistic: &'a str,
    value: f64,
    ci_lo: Option<f64>,
    ci_hi: Option<f64>,
    trials: u64,
    wall_ms: u128,
    version: &'static str,
    rounding: &'static str,
}

pub struct Report<W: Write> {
    out: csv::Writer<W>,
    experiment: &'static str,
    n: usize,
    eps: f64,
    seed: u64,
    started: Instant,
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

impl<W: Write> Report<W> {
    /// Headers are written by the first row.
    pub fn new(out: W, experiment: &'static str, n: usize, eps: f64, seed: u64) -> Self {
        Report { out: csv::Writer::from_writer(out), experiment, n, eps, seed, started: Instant::now() }
    }

    pub fn row(&mut self, statistic: &str, value: f64, interval: Option<(f64, f64)>, trials: u64) -> Result<()> {
        let row = Row {
            experiment: self.experiment,
            n: self.n,
            eps: self.eps,
            seed: self.seed,
            statistic,
            value,
            ci_lo: interval.map(|c| c.0),
            ci_hi: interval.map(|c| c.1),
            trials,
            wall_ms: self.started.elapsed().as_millis(),
            version: VERSION,
            rounding: ROUNDING_POLICY,
        };
        self.out.serialize(row).map_err(csv_error)?;
        self.out.flush()?;
        Ok(())
    }

    pub fn estimate(&mut self, statistic: &str, e: &Estimate, trials: u64) -> Result<()> {
        self.row(statistic, e.value, Some((e.lo, e.hi)), trials)
    }

    pub fn value(&mut self, statistic: &str, value: f64, trials: u64) -> Result<()> {
        self.row(statistic, value, None, trials)
    }
}
