//! Entropic and geometric entanglement measures of pure chain states.
//!
//! Entropies are in bits. For a pure state the reduced density matrix of a subset and of
//! its complement share their nonzero spectrum, so subset entropies are always computed on
//! whichever side is smaller.

mod geometric;

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{partial_trace, validate_subset, DensityMatrix, StateVector};
use crate::error::{Error, Result};

pub use geometric::{
    geometric_measure, local_update, power_iteration, GeometricOptions, GeometricResult, RestartTrace,
};

/// Eigenvalues below this mark a non-physical density matrix; smaller negative
/// eigenvalues are rounding noise and count as zero.
pub const NEGATIVE_EIGENVALUE_LIMIT: f64 = -1e-8;

/// Von Neumann entropy `−Σ p log₂ p`.
pub fn entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_of_spectrum(&rho.eigenvalues())
}

pub(crate) fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &p in eigenvalues {
        if p < NEGATIVE_EIGENVALUE_LIMIT {
            return Err(Error::Validation(format!(
                "density matrix has eigenvalue {p:e} < {NEGATIVE_EIGENVALUE_LIMIT:e}"
            )));
        }
        if p > 0.0 {
            s -= p * p.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Entropy of the reduced state on `subset` (1-based, strictly increasing).
pub fn subset_entropy(state: &StateVector, subset: &[usize]) -> Result<f64> {
    let l = state.num_sites();
    validate_subset(l, subset)?;
    if 2 * subset.len() > l {
        let complement: Vec<usize> = (1..=l).filter(|s| !subset.contains(s)).collect();
        if !complement.is_empty() {
            return entropy(&partial_trace(state, &complement)?);
        }
    }
    entropy(&partial_trace(state, subset)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AeeEntry {
    pub l: usize,
    /// `S(l)` in bits.
    pub entropy: f64,
    /// `S(l)/l`.
    pub normalized: f64,
    pub partition_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AeeReport {
    pub num_sites: usize,
    pub per_l: BTreeMap<usize, AeeEntry>,
}

/// Mean entropy over every size-`l` subset of sites.
pub fn average_entanglement_entropy(state: &StateVector, l: usize) -> Result<AeeEntry> {
    let n = state.num_sites();
    if l == 0 || l >= n {
        return Err(Error::Argument(format!(
            "subsystem size {l} outside 1..={}",
            n.saturating_sub(1)
        )));
    }
    // S(P) = S(P̄): enumerate on the smaller side, C(L, l) = C(L, L − l).
    let k = l.min(n - l);
    let subsets: Vec<Vec<usize>> = (1..=n).combinations(k).collect();
    let values: Vec<f64> = subsets
        .par_iter()
        .map(|s| entropy(&partial_trace(state, s)?))
        .collect::<Result<_>>()?;
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(AeeEntry {
        l,
        entropy: mean,
        normalized: mean / l as f64,
        partition_count: values.len(),
    })
}

pub fn aee_report(state: &StateVector) -> Result<AeeReport> {
    let n = state.num_sites();
    let mut per_l = BTreeMap::new();
    for l in 1..n {
        let entry = if 2 * l > n {
            let mirror = per_l[&(n - l)];
            let AeeEntry {
                entropy,
                partition_count,
                ..
            } = mirror;
            AeeEntry {
                l,
                entropy,
                normalized: entropy / l as f64,
                partition_count,
            }
        } else {
            average_entanglement_entropy(state, l)?
        };
        per_l.insert(l, entry);
    }
    Ok(AeeReport {
        num_sites: n,
        per_l,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BipartitionMinimum {
    pub entropy: f64,
    /// A minimizing subset (size ≤ L/2).
    pub subset: Vec<usize>,
}

/// Smallest entropy over all nonempty proper subsets.
pub fn min_bipartition_entropy(state: &StateVector) -> Result<BipartitionMinimum> {
    let n = state.num_sites();
    if n < 2 {
        return Err(Error::Size("bipartitions need at least two sites".into()));
    }
    let mut best: Option<BipartitionMinimum> = None;
    for k in 1..=n / 2 {
        let subsets: Vec<Vec<usize>> = (1..=n).combinations(k).collect();
        let values: Vec<f64> = subsets
            .par_iter()
            .map(|s| entropy(&partial_trace(state, s)?))
            .collect::<Result<_>>()?;
        for (s, v) in subsets.into_iter().zip(values) {
            if best.as_ref().is_none_or(|b| v < b.entropy) {
                best = Some(BipartitionMinimum {
                    entropy: v,
                    subset: s,
                });
            }
        }
    }
    Ok(best.expect("at least one subset for L ≥ 2"))
}

/// Detects a perfect pairing into maximally entangled two-site blocks: every site carries
/// one bit of entropy and shares a pure two-site block with exactly one partner.
pub fn detect_bell_pairs(state: &StateVector, tol: f64) -> Result<Option<Vec<(usize, usize)>>> {
    let n = state.num_sites();
    if !n.is_multiple_of(2) {
        return Ok(None);
    }
    for site in 1..=n {
        if (subset_entropy(state, &[site])? - 1.0).abs() > tol {
            return Ok(None);
        }
    }
    let mut partner = vec![0usize; n + 1];
    for i in 1..=n {
        for j in i + 1..=n {
            if subset_entropy(state, &[i, j])? < tol {
                if partner[i] != 0 || partner[j] != 0 {
                    return Ok(None);
                }
                partner[i] = j;
                partner[j] = i;
            }
        }
    }
    if partner[1..].contains(&0) {
        return Ok(None);
    }
    Ok(Some(
        (1..=n)
            .filter(|&i| partner[i] > i)
            .map(|i| (i, partner[i]))
            .collect(),
    ))
}
