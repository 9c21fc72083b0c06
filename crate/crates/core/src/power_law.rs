//! Least-squares power-law fit on the log-log rank/RF curve.
//!
//! The model is `log10(rf) = k * log10(rank) + intercept`, fitted by ordinary
//! least squares. Ranks come from the table as-is; filtering rows never
//! renumbers the remaining ones.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rf_model::{fmt_f64, RfTable};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// Slope on the log-log plot, the exponent of `rank`.
    pub k: f64,
    pub intercept: f64,
    /// Residual standard error, `sqrt(SSR / dof)`.
    pub rse: f64,
    /// `n_points - 2`.
    pub dof: usize,
    pub n_points: usize,
    pub log_base: u32,
}

impl PowerLawFit {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fit serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let fit: PowerLawFit = serde_json::from_str(text)
            .map_err(|e| Error::validation(format!("fit report: {e}")))?;
        if fit.log_base != 10 {
            return Err(Error::validation(format!(
                "fit report: unsupported log_base {}",
                fit.log_base
            )));
        }
        if !fit.k.is_finite() {
            return Err(Error::validation("fit report: k is not finite"));
        }
        Ok(fit)
    }
}

/// `(log10 rank, log10 rf_raw)` in rank order. With `exclude_sub_one`, rows
/// whose raw RF is below 1 are dropped.
pub fn plot_points(table: &RfTable, exclude_sub_one: bool) -> Vec<(f64, f64)> {
    log_points(table, exclude_sub_one, f64::log10)
}

fn log_points(table: &RfTable, exclude_sub_one: bool, log: fn(f64) -> f64) -> Vec<(f64, f64)> {
    table
        .rows()
        .iter()
        .filter(|r| r.rf_raw > 0.0)
        .filter(|r| !(exclude_sub_one && r.rf_raw < 1.0))
        .map(|r| (log(r.rank as f64), log(r.rf_raw)))
        .collect()
}

pub fn fit_power_law(table: &RfTable, exclude_sub_one: bool) -> Result<PowerLawFit> {
    fit_points(&plot_points(table, exclude_sub_one))
}

/// Ordinary least squares of `y` on `x`.
pub fn fit_points(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    let n = points.len();
    if n < 3 {
        return Err(Error::validation(format!(
            "power-law fit needs at least 3 points, got {n}"
        )));
    }
    let nf = n as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in points {
        let dx = x - mean_x;
        sxx += dx * dx;
        sxy += dx * (y - mean_y);
    }
    if sxx <= 0.0 || !sxx.is_finite() {
        return Err(Error::DegenerateFit("all points share one x value".into()));
    }
    let k = sxy / sxx;
    let intercept = mean_y - k * mean_x;
    let ssr: f64 = points
        .iter()
        .map(|&(x, y)| {
            let r = y - (k * x + intercept);
            r * r
        })
        .sum();
    let dof = n - 2;
    Ok(PowerLawFit {
        k,
        intercept,
        rse: (ssr / dof as f64).sqrt(),
        dof,
        n_points: n,
        log_base: 10,
    })
}

/// Writes plot points as `log10_rank,log10_rf` CSV.
pub fn write_plot_csv<W: Write>(points: &[(f64, f64)], mut out: W) -> Result<()> {
    writeln!(out, "log10_rank,log10_rf")?;
    for &(x, y) in points {
        writeln!(out, "{},{}", fmt_f64(x), fmt_f64(y))?;
    }
    Ok(())
}
