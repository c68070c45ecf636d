//! Sweep result tables and CSV emission.
//!
//! One fixed schema covers every sweep. Columns, in order:
//! `p1, p2, theta, eta, m, g, t1, t2, success_prob_sim,
//! success_prob_analytic, fidelity, fidelity_zero_jitter, g_e, leakage,
//! prob_up_up, prob_up_down, prob_down_up`. For zero-jitter sweeps
//! `fidelity_zero_jitter` equals `fidelity`; jitter sweeps carry the
//! nominal-time fidelity there so both numbers live in the same file.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::dynamics::TimingSolution;
use crate::error::{Error, Result};

/// One sweep point: the inputs that produced it and every reported output.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub p1: f64,
    pub p2: f64,
    pub theta: f64,
    pub eta: f64,
    pub m: u32,
    pub g: f64,
    pub t1: f64,
    pub t2: f64,
    pub success_prob_sim: f64,
    pub success_prob_analytic: f64,
    pub fidelity: f64,
    pub fidelity_zero_jitter: f64,
    pub g_e: f64,
    pub leakage: f64,
    pub prob_up_up: f64,
    pub prob_up_down: f64,
    pub prob_down_up: f64,
}

/// Ordered rows of one sweep, one per grid point or jitter sample.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

pub const SWEEP_CSV_HEADER: [&str; 17] = [
    "p1",
    "p2",
    "theta",
    "eta",
    "m",
    "g",
    "t1",
    "t2",
    "success_prob_sim",
    "success_prob_analytic",
    "fidelity",
    "fidelity_zero_jitter",
    "g_e",
    "leakage",
    "prob_up_up",
    "prob_up_down",
    "prob_down_up",
];

/// 17 significant digits: enough for an exact binary64 round trip.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl SweepResult {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Write the table to any writer as CSV with a header row.
    pub fn write_csv_to<W: Write>(&self, writer: W) -> std::result::Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(SWEEP_CSV_HEADER)?;
        for row in &self.rows {
            out.write_record(&[
                format_f64(row.p1),
                format_f64(row.p2),
                format_f64(row.theta),
                format_f64(row.eta),
                row.m.to_string(),
                format_f64(row.g),
                format_f64(row.t1),
                format_f64(row.t2),
                format_f64(row.success_prob_sim),
                format_f64(row.success_prob_analytic),
                format_f64(row.fidelity),
                format_f64(row.fidelity_zero_jitter),
                format_f64(row.g_e),
                format_f64(row.leakage),
                format_f64(row.prob_up_up),
                format_f64(row.prob_up_down),
                format_f64(row.prob_down_up),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Write the table to a file, reporting the path on failure.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::Csv {
            path: path.display().to_string(),
            source: e.into(),
        })?;
        self.write_csv_to(file).map_err(|source| Error::Csv {
            path: path.display().to_string(),
            source,
        })
    }
}

/// Write a timing-search table (`m, g_t, delta`) as CSV.
pub fn write_timing_csv(solutions: &[TimingSolution], path: &Path) -> Result<()> {
    let wrap = |source| Error::Csv {
        path: path.display().to_string(),
        source,
    };
    let file = File::create(path).map_err(|e| wrap(e.into()))?;
    let mut out = csv::Writer::from_writer(file);
    out.write_record(["m", "g_t", "delta"]).map_err(wrap)?;
    for sol in solutions {
        out.write_record(&[
            sol.m.to_string(),
            format_f64(sol.g_t),
            format_f64(sol.delta),
        ])
        .map_err(wrap)?;
    }
    out.flush().map_err(|e| Error::Csv {
        path: path.display().to_string(),
        source: e.into(),
    })
}
