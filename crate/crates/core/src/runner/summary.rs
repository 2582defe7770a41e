use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, Measure, MAX_EXPERIMENT_SITES, MIN_EXPERIMENT_SITES};
use super::measure_trajectory;
use crate::chain::Axis;
use crate::error::{Error, Result};
use crate::floquet::{Boundary, FloquetSpec, Model};
use crate::qfi::QfiOptions;
use crate::spectral::detect_period;

/// Longest trajectory run per summary cell.
pub const MAX_SUMMARY_PERIODS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SummaryOptions {
    pub seed: u64,
    pub qfi: QfiOptions,
    /// Frobenius tolerance for `Uⁿ ∝ I`.
    pub period_tolerance: f64,
}

impl Default for SummaryOptions {
    fn default() -> Self {
        SummaryOptions {
            seed: 0,
            qfi: QfiOptions::default(),
            period_tolerance: 1e-7,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub model: Model,
    pub num_sites: usize,
    pub boundary: Boundary,
    pub initial_axis: Axis,
    pub peak_depth: usize,
    pub peak_depth_periods: Vec<usize>,
    pub detected_projective_period: Option<usize>,
    pub exact_identity_period: Option<usize>,
    pub notes: Vec<String>,
}

fn summarize_cell(model: Model, l: usize, boundary: Boundary, axis: Axis, options: &SummaryOptions) -> Result<SummaryRow> {
    let spec = FloquetSpec::new(model, l, boundary)?;
    let report = detect_period(&spec, 2 * MAX_SUMMARY_PERIODS, options.period_tolerance)?;
    let projective = report.projective.map(|h| h.period);
    let exact = report.exact.map(|h| h.period);
    let mut notes = Vec::new();
    let periods = match projective {
        Some(p) if p <= MAX_SUMMARY_PERIODS => p,
        Some(p) => {
            notes.push(format!("projective period {p} capped at {MAX_SUMMARY_PERIODS}"));
            MAX_SUMMARY_PERIODS
        }
        None => {
            notes.push(format!("no projective period up to {}", 2 * MAX_SUMMARY_PERIODS));
            MAX_SUMMARY_PERIODS
        }
    };
    let config = ExperimentConfig {
        model,
        num_sites: l,
        boundary,
        initial_axis: axis,
        n_max: periods,
        measures: [Measure::Qfi].into(),
        seed: options.seed,
        qfi: options.qfi,
        ..ExperimentConfig::default()
    };
    let records = measure_trajectory(&config)?;
    let depths: Vec<(usize, usize)> = records
        .iter()
        .map(|r| (r.n, r.qfi.as_ref().expect("qfi requested").depth))
        .collect();
    let peak_depth = depths.iter().map(|d| d.1).max().unwrap_or(1);
    let peak_depth_periods = depths.iter().filter(|d| d.1 == peak_depth).map(|d| d.0).collect();
    if peak_depth == 1 {
        notes.push("depth 1: not certified".into());
    } else if 2 * peak_depth < l {
        notes.push("peak depth below L/2".into());
    }
    Ok(SummaryRow {
        model,
        num_sites: l,
        boundary,
        initial_axis: axis,
        peak_depth,
        peak_depth_periods,
        detected_projective_period: projective,
        exact_identity_period: exact,
        notes,
    })
}

/// One row per (model, size, boundary, axis) combination, in that nesting order.
pub fn generate_summary(
    models: &[Model],
    sizes: &[usize],
    boundaries: &[Boundary],
    axes: &[Axis],
    options: &SummaryOptions,
) -> Result<Vec<SummaryRow>> {
    if let Some(&l) = sizes
        .iter()
        .find(|l| !(MIN_EXPERIMENT_SITES..=MAX_EXPERIMENT_SITES).contains(*l))
    {
        return Err(Error::config(
            "sizes",
            format!("{l} outside [{MIN_EXPERIMENT_SITES}, {MAX_EXPERIMENT_SITES}]"),
        ));
    }
    let mut cells = Vec::new();
    for &m in models {
        for &l in sizes {
            for &b in boundaries {
                for &a in axes {
                    cells.push((m, l, b, a));
                }
            }
        }
    }
    cells
        .par_iter()
        .map(|&(m, l, b, a)| summarize_cell(m, l, b, a, options))
        .collect()
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

fn opt(v: Option<usize>) -> String {
    v.map(|p| p.to_string()).unwrap_or_default()
}

/// Writes `summary.csv`-style output.
pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut text = String::from(
        "model,L,boundary,initial,peak_depth,peak_depth_periods,projective_period,exact_period,notes\n",
    );
    for r in rows {
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.model,
            r.num_sites,
            r.boundary,
            r.initial_axis,
            r.peak_depth,
            join(&r.peak_depth_periods),
            opt(r.detected_projective_period),
            opt(r.exact_identity_period),
            join(&r.notes),
        ));
    }
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
