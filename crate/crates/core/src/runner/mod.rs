//! Experiment orchestration: evolve a chain period by period, measure, and export CSV.
//!
//! Every run writes headered CSV files into the output directory, one per enabled measure,
//! plus `manifest.json` echoing the configuration. Floats carry 12 significant digits, so
//! identical configurations produce byte-identical files.

mod config;
mod summary;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::chain::{make_polarized_state, StateVector};
use crate::entanglement::{aee_report, geometric_measure, AeeReport, GeometricOptions, GeometricResult};
use crate::error::{Error, Result};
use crate::floquet::{build_dense, Floquet, FloquetSpec};
use crate::qfi::{maximize_qfi, QfiOptions, QfiResult};
use crate::seed;
use crate::spectral::{degeneracy_histogram, quasi_energies_with_tolerance};

pub use config::{parse_measures, ExperimentConfig, Measure, MAX_EXPERIMENT_SITES, MIN_EXPERIMENT_SITES};
pub use summary::{generate_summary, write_summary, SummaryOptions, SummaryRow, MAX_SUMMARY_PERIODS};

/// Formats like C's `%.12g`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        trim_zeros(&format!("{x:.*}", (11 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Measurements taken after `n` periods.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodRecord {
    pub n: usize,
    pub aee: Option<AeeReport>,
    pub geom: Option<GeometricResult>,
    pub qfi: Option<QfiResult>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub records: Vec<PeriodRecord>,
    /// `(theta, multiplicity)` rows when the spectrum was requested.
    pub spectrum: Option<Vec<(f64, usize)>>,
}

fn spec_of(config: &ExperimentConfig) -> Result<FloquetSpec> {
    FloquetSpec::new(config.model, config.num_sites, config.boundary)
}

/// The initial product state evolved through `periods` periods.
pub fn evolve_state(config: &ExperimentConfig, periods: usize) -> Result<StateVector> {
    config.validate()?;
    let floquet = Floquet::new(spec_of(config)?)?;
    floquet.evolve(&make_polarized_state(config.num_sites, config.initial_axis)?, periods)
}

/// Measures one state; period-dependent seeds keep restarts independent across `n`.
pub fn measure_state(config: &ExperimentConfig, state: &StateVector, n: usize) -> Result<PeriodRecord> {
    let aee = if config.wants(Measure::Aee) {
        Some(aee_report(state)?)
    } else {
        None
    };
    let geom = if config.wants(Measure::Geom) {
        let opts = GeometricOptions {
            seed: seed::derive(config.seed, 2 * n as u64),
            ..config.geometric
        };
        Some(geometric_measure(state, &opts)?)
    } else {
        None
    };
    let qfi = if config.wants(Measure::Qfi) {
        let opts = QfiOptions {
            seed: seed::derive(config.seed, 2 * n as u64 + 1),
            ..config.qfi
        };
        Some(maximize_qfi(state, &opts)?)
    } else {
        None
    };
    Ok(PeriodRecord { n, aee, geom, qfi })
}

/// Per-period records for `n = 0..=n_max`, without touching the filesystem.
pub fn measure_trajectory(config: &ExperimentConfig) -> Result<Vec<PeriodRecord>> {
    config.validate()?;
    let floquet = Floquet::new(spec_of(config)?)?;
    let mut state = make_polarized_state(config.num_sites, config.initial_axis)?;
    let mut records = Vec::with_capacity(config.n_max + 1);
    for n in 0..=config.n_max {
        if n > 0 {
            state = floquet.evolve(&state, 1)?;
        }
        records.push(measure_state(config, &state, n)?);
    }
    Ok(records)
}

/// `(theta, multiplicity)` histogram of the configured Floquet operator.
pub fn spectrum_rows(config: &ExperimentConfig) -> Result<Vec<(f64, usize)>> {
    config.validate()?;
    let u = build_dense(&spec_of(config)?)?;
    Ok(degeneracy_histogram(&quasi_energies_with_tolerance(&u, config.cluster_tolerance)?))
}

struct CsvFile {
    path: PathBuf,
    out: BufWriter<File>,
}

impl CsvFile {
    fn create(dir: &Path, name: &str, header: &str) -> Result<Self> {
        let path = dir.join(name);
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut csv = CsvFile {
            path,
            out: BufWriter::new(file),
        };
        csv.row(header)?;
        Ok(csv)
    }

    fn row(&mut self, line: &str) -> Result<()> {
        writeln!(self.out, "{line}").map_err(|e| Error::io(&self.path, e))
    }

    fn finish(mut self) -> Result<PathBuf> {
        self.out.flush().map_err(|e| Error::io(&self.path, e))?;
        Ok(self.path)
    }
}

fn write_records(dir: &Path, config: &ExperimentConfig, records: &[PeriodRecord]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    if config.wants(Measure::Aee) {
        let mut csv = CsvFile::create(dir, "aee.csv", "n,l,S,S_over_l")?;
        for r in records {
            for e in r.aee.iter().flat_map(|a| a.per_l.values()) {
                csv.row(&format!(
                    "{},{},{},{}",
                    r.n,
                    e.l,
                    format_float(e.entropy),
                    format_float(e.normalized)
                ))?;
            }
        }
        files.push(csv.finish()?);
    }
    if config.wants(Measure::Geom) {
        let mut csv = CsvFile::create(dir, "geom.csv", "n,lambda,e_g,converged")?;
        for r in records {
            if let Some(g) = &r.geom {
                csv.row(&format!(
                    "{},{},{},{}",
                    r.n,
                    format_float(g.lambda),
                    format_float(g.e_g),
                    g.converged
                ))?;
            }
        }
        files.push(csv.finish()?);
    }
    if config.wants(Measure::Qfi) {
        let mut csv = CsvFile::create(dir, "qfi.csv", "n,f_q,depth,violated_ks")?;
        for r in records {
            if let Some(q) = &r.qfi {
                let ks: Vec<String> = q.violated_ks().iter().map(|k| k.to_string()).collect();
                csv.row(&format!("{},{},{},{}", r.n, format_float(q.f_q), q.depth, ks.join(";")))?;
            }
        }
        files.push(csv.finish()?);
    }
    Ok(files)
}

fn write_manifest(dir: &Path, config: &ExperimentConfig) -> Result<PathBuf> {
    let path = dir.join("manifest.json");
    let manifest = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "seed": config.seed,
        "config": config,
    });
    let text = serde_json::to_string_pretty(&manifest).expect("config serializes");
    fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Runs the configured experiment and writes its data files into `config.out_dir`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let dir = &config.out_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    let spectrum = if config.wants(Measure::Spectrum) {
        let rows = spectrum_rows(config)?;
        let mut csv = CsvFile::create(dir, "spectrum.csv", "theta,multiplicity")?;
        for (theta, m) in &rows {
            csv.row(&format!("{},{m}", format_float(*theta)))?;
        }
        files.push(csv.finish()?);
        Some(rows)
    } else {
        None
    };
    let per_period = [Measure::Aee, Measure::Geom, Measure::Qfi]
        .iter()
        .any(|m| config.wants(*m));
    let records = if per_period {
        measure_trajectory(config)?
    } else {
        Vec::new()
    };
    files.extend(write_records(dir, config, &records)?);
    files.push(write_manifest(dir, config)?);
    Ok(RunOutput {
        files,
        records,
        spectrum,
    })
}

/// Writes `index,re,im` rows for every amplitude.
pub fn write_state(path: &Path, state: &StateVector) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>, line: String| writeln!(out, "{line}").map_err(|e| Error::io(path, e));
    write(&mut out, "index,re,im".into())?;
    for (i, a) in state.amplitudes().iter().enumerate() {
        write(&mut out, format!("{i},{},{}", format_float(a.re), format_float(a.im)))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(20.0), "20");
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(1e-7), "1e-07");
        assert_eq!(format_float(-2.5e-12), "-2.5e-12");
        assert_eq!(format_float(123456789012345.0), "1.23456789012e+14");
        assert_eq!(format_float(99.99999999999999), "100");
    }
}
