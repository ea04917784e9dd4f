use serde::Serialize;

use crate::allocation::worst_case_measure;
use crate::error::{Error, Result};
use crate::prob::TOL;

use super::portfolio::Portfolio;
use super::runs::{model4_run, ID_MODEL4_EXTRA, ID_MODEL4_SCALED};

/// One Model 4 run at a given initial capital.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub capital: f64,
    pub retention: f64,
    /// `u_0(λ_0 S_plus)`.
    pub insurer_utility: f64,
    /// `u_0(λ_0 S_plus) − k_0`.
    pub extra_return: f64,
    /// Extra return per unit of capital.
    pub return_ratio: f64,
    /// Residual of `u_0(λ_0 S_plus) = λ_0 E_{Q_0}[(R − S)^+]`.
    pub scaled_identity_residual: f64,
    /// Residual of the closed form of the extra return; zero when shares
    /// are degenerate.
    pub extra_identity_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// `E_{Q_r}[S] − E_{Q_0}[S]`, the large-capital limit of the extra return.
    pub limit_extra_return: f64,
    pub retention_non_decreasing: bool,
    pub utility_non_decreasing: bool,
}

impl SweepTable {
    pub fn monotone(&self) -> bool {
        self.retention_non_decreasing && self.utility_non_decreasing
    }
}

fn non_decreasing(values: impl Iterator<Item = f64>) -> bool {
    let mut prev = f64::NEG_INFINITY;
    for v in values {
        if v < prev - TOL * prev.abs().max(1.0) {
            return false;
        }
        prev = v;
    }
    true
}

/// Model 4 across a strictly ascending grid of positive capital levels.
pub fn capital_sweep(portfolio: &Portfolio, grid: &[f64]) -> Result<SweepTable> {
    if grid.is_empty() {
        return Err(Error::invalid(
            "grid",
            "at least one capital level is required",
        ));
    }
    for (k, &c) in grid.iter().enumerate() {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::invalid(
                format!("grid[{k}]"),
                format!("capital levels must be positive, got {c}"),
            ));
        }
        if k > 0 && c <= grid[k - 1] {
            return Err(Error::invalid(
                format!("grid[{k}]"),
                "capital levels must be strictly ascending",
            ));
        }
    }
    portfolio.validate()?;
    let fr = portfolio.require_reinsurer()?;
    let s = portfolio.aggregate();
    let qr = worst_case_measure(&portfolio.space, fr, &s)?;
    let q0 = worst_case_measure(&portfolio.space, &portfolio.insurer, &s)?;
    let limit_extra_return = qr.expect(&s) - q0.expect(&s);

    let mut rows = Vec::with_capacity(grid.len());
    for &capital in grid {
        let mut at = portfolio.clone();
        at.capital = capital;
        let report = model4_run(&at)?;
        let insurer_utility = report.insurer_verdict().utility;
        let extra_return = insurer_utility - capital;
        let residual = |name| report.identity(name).map_or(0.0, |i| i.residual);
        rows.push(SweepRow {
            capital,
            retention: report.retention.as_ref().map_or(0.0, |r| r.retention),
            insurer_utility,
            extra_return,
            return_ratio: extra_return / capital,
            scaled_identity_residual: residual(ID_MODEL4_SCALED),
            extra_identity_residual: residual(ID_MODEL4_EXTRA),
        });
    }
    Ok(SweepTable {
        retention_non_decreasing: non_decreasing(rows.iter().map(|r| r.retention)),
        utility_non_decreasing: non_decreasing(rows.iter().map(|r| r.insurer_utility)),
        rows,
        limit_extra_return,
    })
}

/// `steps` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
            .collect(),
    }
}
