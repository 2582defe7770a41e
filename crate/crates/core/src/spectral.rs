//! Quasi-energy spectra of Floquet operators.
//!
//! A unitary is normal, so its Hermitian parts `H₁ = (U + U†)/2` and `H₂ = (U − U†)/2i`
//! commute and share eigenvectors. We diagonalize `H₁`, then diagonalize `H₂` inside each
//! (near-)degenerate eigenspace of `H₁`; the eigenvalue of `U` on a joint eigenvector is
//! `h₁ + i·h₂`. Only a Hermitian eigensolver is needed.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::floquet::{build_dense, FloquetSpec, UnitaryMatrix};

/// Default single-linkage tolerance for grouping quasi-energies, radians.
pub const CLUSTER_TOLERANCE: f64 = 1e-7;

/// Default tolerance for matching cluster centers to a common lattice, radians.
pub const SPACING_TOLERANCE: f64 = 1e-6;

/// Eigenvalues of `H₁` closer than this are treated as one invariant subspace.
const H1_GROUP_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cluster {
    pub center: f64,
    pub multiplicity: usize,
}

/// Sorted quasi-energies `θ_k ∈ (−π, π]` with eigenvalues `e^{−iθ_k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiSpectrum {
    thetas: Vec<f64>,
    cluster_tolerance: f64,
    clusters: Vec<Cluster>,
}

/// Maps an angle into `(−π, π]`; angles within `snap` above `−π` are sent to `π`.
fn wrap_angle(theta: f64, snap: f64) -> f64 {
    let mut t = theta.rem_euclid(TAU);
    if t > PI {
        t -= TAU;
    }
    if t <= -PI + snap {
        t = PI;
    }
    t
}

impl QuasiSpectrum {
    pub fn from_thetas(thetas: Vec<f64>, cluster_tolerance: f64) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::Argument("empty quasi-energy list".into()));
        }
        if thetas.iter().any(|t| !t.is_finite()) {
            return Err(Error::Validation("non-finite quasi-energy".into()));
        }
        let mut thetas: Vec<f64> = thetas
            .into_iter()
            .map(|t| wrap_angle(t, cluster_tolerance))
            .collect();
        thetas.sort_by(f64::total_cmp);

        let mut clusters = Vec::new();
        let mut start = 0;
        for i in 1..=thetas.len() {
            if i == thetas.len() || thetas[i] - thetas[i - 1] > cluster_tolerance {
                let members = &thetas[start..i];
                clusters.push(Cluster {
                    center: members.iter().sum::<f64>() / members.len() as f64,
                    multiplicity: members.len(),
                });
                start = i;
            }
        }
        Ok(QuasiSpectrum {
            thetas,
            cluster_tolerance,
            clusters,
        })
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn cluster_tolerance(&self) -> f64 {
        self.cluster_tolerance
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn dim(&self) -> usize {
        self.thetas.len()
    }

    /// Eigenvalues `e^{−iθ_k}`.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.thetas.iter().map(|t| Complex64::from_polar(1.0, -t)).collect()
    }
}

/// Full joint eigendecomposition: eigenvalues and orthonormal eigenvectors (columns).
pub struct Eigensystem {
    pub eigenvalues: Vec<Complex64>,
    pub eigenvectors: DMatrix<Complex64>,
}

impl Eigensystem {
    /// Largest `‖Uv − λv‖` over all eigenpairs.
    pub fn max_residual(&self, unitary: &UnitaryMatrix) -> f64 {
        let uv = unitary.matrix() * &self.eigenvectors;
        (0..self.eigenvalues.len())
            .map(|k| (uv.column(k) - self.eigenvectors.column(k) * self.eigenvalues[k]).norm())
            .fold(0.0, f64::max)
    }
}

pub fn eigensystem(unitary: &UnitaryMatrix) -> Result<Eigensystem> {
    let defect = unitary.probe_defect();
    if defect > 1e-9 {
        return Err(Error::Validation(format!(
            "operator is not unitary (probe defect {defect:e})"
        )));
    }
    let u = unitary.matrix();
    let n = u.nrows();
    let ud = u.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let h1 = (u + &ud) * half;
    let h2 = (u - &ud) * Complex64::new(0.0, -0.5);

    let eig = SymmetricEigen::new(h1);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = DMatrix::zeros(n, n);
    let mut col = 0;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n
            && eig.eigenvalues[order[end]] - eig.eigenvalues[order[end - 1]] < H1_GROUP_TOLERANCE
        {
            end += 1;
        }
        let idx = &order[start..end];
        let m = idx.len();
        let basis = DMatrix::from_fn(n, m, |r, c| eig.eigenvectors[(r, idx[c])]);
        let h1_vals: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        if m == 1 {
            let v = basis.column(0);
            let h2_val = (v.adjoint() * &h2 * v)[(0, 0)].re;
            eigenvalues.push(Complex64::new(h1_vals[0], h2_val));
            eigenvectors.set_column(col, &v);
            col += 1;
        } else {
            let k = basis.adjoint() * &h2 * &basis;
            let sub = SymmetricEigen::new(k);
            let joint = &basis * &sub.eigenvectors;
            for j in 0..m {
                // Rayleigh quotient of H₁ on the rotated vector, exact inside the group.
                let h1_val: f64 = (0..m)
                    .map(|r| sub.eigenvectors[(r, j)].norm_sqr() * h1_vals[r])
                    .sum();
                eigenvalues.push(Complex64::new(h1_val, sub.eigenvalues[j]));
                eigenvectors.set_column(col, &joint.column(j));
                col += 1;
            }
        }
        start = end;
    }
    for lambda in &mut eigenvalues {
        *lambda /= lambda.norm();
    }
    Ok(Eigensystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Quasi-energies of `U` with the default cluster tolerance.
pub fn quasi_energies(unitary: &UnitaryMatrix) -> Result<QuasiSpectrum> {
    quasi_energies_with_tolerance(unitary, CLUSTER_TOLERANCE)
}

pub fn quasi_energies_with_tolerance(unitary: &UnitaryMatrix, cluster_tolerance: f64) -> Result<QuasiSpectrum> {
    let sys = eigensystem(unitary)?;
    let thetas = sys.eigenvalues.iter().map(|l| -l.arg()).collect();
    QuasiSpectrum::from_thetas(thetas, cluster_tolerance)
}

/// `(center, multiplicity)` per cluster, sorted by center.
pub fn degeneracy_histogram(spectrum: &QuasiSpectrum) -> Vec<(f64, usize)> {
    spectrum
        .clusters()
        .iter()
        .map(|c| (c.center, c.multiplicity))
        .collect()
}

/// Every cluster center equals `offset + m·step` for an integer `m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Spacing {
    pub step: f64,
    /// In `(−step/2, step/2]`.
    pub offset: f64,
    /// Largest distance of a center from the lattice.
    pub residual: f64,
}

impl Spacing {
    /// Smallest `n ≤ max_n` with `n·step ≡ 0 (mod 2π)`: the lattice then collapses to one phase.
    pub fn implied_projective_period(&self, tol: f64, max_n: usize) -> Option<usize> {
        (1..=max_n).find(|&n| angle_is_zero(n as f64 * self.step, tol * n as f64))
    }

    /// Smallest `n ≤ max_n` at which the collapsed phase `e^{−i·n·offset}` is also 1.
    pub fn implied_exact_period(&self, tol: f64, max_n: usize) -> Option<usize> {
        (1..=max_n).find(|&n| {
            angle_is_zero(n as f64 * self.step, tol * n as f64)
                && angle_is_zero(n as f64 * self.offset, tol * n as f64)
        })
    }
}

fn angle_is_zero(angle: f64, tol: f64) -> bool {
    let r = angle.rem_euclid(TAU);
    r.min(TAU - r) < tol
}

const MAX_SPACING_DIVISOR: usize = 64;

/// Largest common step of the cluster centers (with a common offset).
pub fn detect_spacing(spectrum: &QuasiSpectrum) -> Result<Spacing> {
    detect_spacing_with_tolerance(spectrum, SPACING_TOLERANCE)
}

pub fn detect_spacing_with_tolerance(spectrum: &QuasiSpectrum, tol: f64) -> Result<Spacing> {
    let centers: Vec<f64> = spectrum.clusters().iter().map(|c| c.center).collect();
    if centers.len() < 2 {
        return Err(Error::Argument(
            "spacing detection needs at least two distinct quasi-energies".into(),
        ));
    }
    let min_gap = centers
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let base = centers[0];
    for divisor in 1..=MAX_SPACING_DIVISOR {
        let step = min_gap / divisor as f64;
        if step <= 2.0 * tol {
            break;
        }
        let residual = centers
            .iter()
            .map(|c| {
                let m = (c - base) / step;
                (m - m.round()).abs() * step
            })
            .fold(0.0, f64::max);
        if residual < tol {
            // Refine the step by least squares over the integer labels.
            let labels: Vec<f64> = centers.iter().map(|c| ((c - base) / step).round()).collect();
            let (num, den) = labels
                .iter()
                .zip(&centers)
                .fold((0.0, 0.0), |(n, d), (m, c)| (n + m * (c - base), d + m * m));
            let step = if den > 0.0 { num / den } else { step };
            let mut offset = base.rem_euclid(step);
            if offset > step / 2.0 + tol {
                offset -= step;
            }
            let residual = centers
                .iter()
                .map(|c| {
                    let m = (c - offset) / step;
                    (m - m.round()).abs() * step
                })
                .fold(0.0, f64::max);
            return Ok(Spacing {
                step,
                offset,
                residual,
            });
        }
    }
    Err(Error::NoSpacing { tolerance: tol })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeriodHit {
    pub period: usize,
    /// `Uⁿ ≈ phase·I`.
    #[serde(serialize_with = "serialize_complex")]
    pub phase: Complex64,
    /// `‖Uⁿ − phase·I‖_F`.
    pub deviation: f64,
}

fn serialize_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// Stroboscopic periods read off the spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeriodReport {
    /// Smallest `n` with `Uⁿ ∝ I` (any global phase).
    pub projective: Option<PeriodHit>,
    /// Smallest `n` with `Uⁿ = I`.
    pub exact: Option<PeriodHit>,
    pub tolerance: f64,
}

pub fn period_from_spectrum(spectrum: &QuasiSpectrum, max_n: usize, tol: f64) -> PeriodReport {
    let thetas = spectrum.thetas();
    let mut projective = None;
    let mut exact = None;
    for n in 1..=max_n {
        let powers: Vec<Complex64> = thetas
            .iter()
            .map(|t| Complex64::from_polar(1.0, -(n as f64) * t))
            .collect();
        if projective.is_none() {
            let mean: Complex64 = powers.iter().sum();
            if mean.norm() > 0.0 {
                let c = mean / mean.norm();
                let dev = powers.iter().map(|p| (p - c).norm_sqr()).sum::<f64>().sqrt();
                if dev < tol {
                    projective = Some(PeriodHit {
                        period: n,
                        phase: c,
                        deviation: dev,
                    });
                }
            }
        }
        let one = Complex64::new(1.0, 0.0);
        let dev = powers.iter().map(|p| (p - one).norm_sqr()).sum::<f64>().sqrt();
        if dev < tol {
            exact = Some(PeriodHit {
                period: n,
                phase: one,
                deviation: dev,
            });
            break;
        }
    }
    PeriodReport {
        projective,
        exact,
        tolerance: tol,
    }
}

/// Projective and exact periods of the Floquet operator, up to `max_n` periods.
pub fn detect_period(spec: &FloquetSpec, max_n: usize, tol: f64) -> Result<PeriodReport> {
    let u = build_dense(spec)?;
    let spectrum = quasi_energies(&u)?;
    Ok(period_from_spectrum(&spectrum, max_n, tol))
}
