use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::chain::Axis;
use crate::entanglement::GeometricOptions;
use crate::error::{Error, Result};
use crate::floquet::{Boundary, Model};
use crate::qfi::QfiOptions;
use crate::spectral::CLUSTER_TOLERANCE;

/// Supported chain lengths for experiments.
pub const MIN_EXPERIMENT_SITES: usize = 2;
pub const MAX_EXPERIMENT_SITES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Aee,
    Geom,
    Qfi,
    Spectrum,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::Aee, Measure::Geom, Measure::Qfi, Measure::Spectrum];
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Aee => "aee",
            Measure::Geom => "geom",
            Measure::Qfi => "qfi",
            Measure::Spectrum => "spectrum",
        })
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "aee" => Ok(Measure::Aee),
            "geom" | "geometric" => Ok(Measure::Geom),
            "qfi" => Ok(Measure::Qfi),
            "spectrum" => Ok(Measure::Spectrum),
            other => Err(Error::Argument(format!("unrecognised measure `{other}`"))),
        }
    }
}

/// Parses a comma-separated measure list; `all` selects every measure.
pub fn parse_measures(text: &str) -> Result<BTreeSet<Measure>> {
    let mut set = BTreeSet::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item.eq_ignore_ascii_case("all") {
            set.extend(Measure::ALL);
        } else {
            set.insert(item.parse()?);
        }
    }
    Ok(set)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub model: Model,
    pub num_sites: usize,
    pub boundary: Boundary,
    pub initial_axis: Axis,
    pub n_max: usize,
    pub measures: BTreeSet<Measure>,
    pub seed: u64,
    pub geometric: GeometricOptions,
    pub qfi: QfiOptions,
    pub cluster_tolerance: f64,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            model: Model::U0,
            num_sites: 10,
            boundary: Boundary::Open,
            initial_axis: Axis::Z_PLUS,
            n_max: 20,
            measures: [Measure::Aee, Measure::Geom, Measure::Qfi].into(),
            seed: 0,
            geometric: GeometricOptions::default(),
            qfi: QfiOptions::default(),
            cluster_tolerance: CLUSTER_TOLERANCE,
            out_dir: PathBuf::from("out"),
        }
    }
}

fn parse_field<T: FromStr>(field: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e: T::Err| Error::config(field, format!("cannot parse `{}`: {e}", value.trim())))
}

impl ExperimentConfig {
    /// Sets one field from its textual `key = value` form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim();
        match key {
            "model" => self.model = parse_field(key, value)?,
            "size" | "L" | "num_sites" => self.num_sites = parse_field(key, value)?,
            "boundary" => self.boundary = parse_field(key, value)?,
            "initial" | "initial_axis" => self.initial_axis = parse_field(key, value)?,
            "periods" | "n_max" => self.n_max = parse_field(key, value)?,
            "measures" => {
                self.measures = parse_measures(value).map_err(|e| Error::config(key, e.to_string()))?
            }
            "seed" => self.seed = parse_field(key, value)?,
            "out" | "out_dir" => self.out_dir = PathBuf::from(value.trim()),
            "geom_restarts" => self.geometric.restarts = parse_field(key, value)?,
            "geom_max_iter" => self.geometric.max_iter = parse_field(key, value)?,
            "geom_tol" => self.geometric.tol = parse_field(key, value)?,
            "qfi_restarts" => self.qfi.restarts = parse_field(key, value)?,
            "qfi_max_iter" => self.qfi.max_iter = parse_field(key, value)?,
            "qfi_tol" => self.qfi.tol = parse_field(key, value)?,
            "qfi_slack" => self.qfi.slack = parse_field(key, value)?,
            "cluster_tolerance" => self.cluster_tolerance = parse_field(key, value)?,
            _ => return Err(Error::config(key, "unknown key")),
        }
        Ok(())
    }

    /// Applies `key = value` lines; blank lines and `#` comments are ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config("config", format!("line {}: expected key = value", lineno + 1))
            })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = ExperimentConfig::default();
        config.apply_text(&text)?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_EXPERIMENT_SITES..=MAX_EXPERIMENT_SITES).contains(&self.num_sites) {
            return Err(Error::config(
                "size",
                format!(
                    "{} outside [{MIN_EXPERIMENT_SITES}, {MAX_EXPERIMENT_SITES}]",
                    self.num_sites
                ),
            ));
        }
        if self.measures.is_empty() {
            return Err(Error::config("measures", "at least one measure is required"));
        }
        if self.geometric.restarts == 0 {
            return Err(Error::config("geom_restarts", "must be at least 1"));
        }
        if self.qfi.restarts == 0 {
            return Err(Error::config("qfi_restarts", "must be at least 1"));
        }
        for (field, v) in [
            ("geom_tol", self.geometric.tol),
            ("qfi_tol", self.qfi.tol),
            ("qfi_slack", self.qfi.slack),
            ("cluster_tolerance", self.cluster_tolerance),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::config(field, format!("{v} is not a finite non-negative number")));
            }
        }
        Ok(())
    }

    pub fn wants(&self, measure: Measure) -> bool {
        self.measures.contains(&measure)
    }
}
