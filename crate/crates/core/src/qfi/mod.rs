//! Quantum Fisher information of local linear observables `Ô = ½ Σ_i n̂_i·σ⃗_i`.
//!
//! For a pure state `F_Q(Ô) = 4 Var(Ô) = n̂ᵀ Γ n̂`, where `Γ` is the `3L × 3L` symmetrized
//! covariance of the single-site Pauli operators. Exceeding the `k`-producibility bound
//! `κ(k)` certifies at least `k + 1`-partite entanglement.

mod ascent;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{apply_pauli, Direction, StateVector};
use crate::error::{Error, Result};
use crate::seed;

pub use ascent::{block_ascent, maximize_on_sphere, AscentTrace};

/// Unit-norm tolerance for direction vectors.
pub const DIRECTION_TOLERANCE: f64 = 1e-12;

/// One unit 3-vector per site.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionField {
    n_hats: Vec<[f64; 3]>,
}

impl DirectionField {
    pub fn new(n_hats: Vec<[f64; 3]>) -> Result<Self> {
        if n_hats.is_empty() {
            return Err(Error::Argument("direction field is empty".into()));
        }
        for (i, v) in n_hats.iter().enumerate() {
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if (norm - 1.0).abs() > DIRECTION_TOLERANCE {
                return Err(Error::Validation(format!(
                    "direction at site {} has norm {norm}",
                    i + 1
                )));
            }
        }
        Ok(DirectionField { n_hats })
    }

    /// The same direction on every site.
    pub fn uniform(num_sites: usize, n_hat: [f64; 3]) -> Result<Self> {
        Self::new(vec![n_hat; num_sites])
    }

    pub fn along(num_sites: usize, direction: Direction) -> Self {
        let mut v = [0.0; 3];
        v[direction.index()] = 1.0;
        DirectionField {
            n_hats: vec![v; num_sites],
        }
    }

    pub fn n_hats(&self) -> &[[f64; 3]] {
        &self.n_hats
    }

    pub fn num_sites(&self) -> usize {
        self.n_hats.len()
    }

    fn flat(&self) -> Vec<f64> {
        self.n_hats.iter().flatten().copied().collect()
    }
}

/// `Γ_(iα)(jβ) = ½⟨{σ_i^α, σ_j^β}⟩ − ⟨σ_i^α⟩⟨σ_j^β⟩`, index `3(i−1) + α` with α = x, y, z.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix {
    gamma: DMatrix<f64>,
    means: Vec<f64>,
}

impl CovarianceMatrix {
    pub fn num_sites(&self) -> usize {
        self.means.len() / 3
    }

    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    /// `⟨σ_i^α⟩` in the same index order as `gamma`.
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// Magnetization vector of `site` (1-based).
    pub fn magnetization(&self, site: usize) -> [f64; 3] {
        let o = 3 * (site - 1);
        [self.means[o], self.means[o + 1], self.means[o + 2]]
    }

    pub fn quadratic_form(&self, dirs: &DirectionField) -> Result<f64> {
        if dirs.num_sites() != self.num_sites() {
            return Err(Error::Argument(format!(
                "{} directions for {} sites",
                dirs.num_sites(),
                self.num_sites()
            )));
        }
        let n = nalgebra::DVector::from_vec(dirs.flat());
        Ok(n.dot(&(&self.gamma * &n)))
    }
}

pub fn covariance_matrix(state: &StateVector) -> CovarianceMatrix {
    let l = state.num_sites();
    let psi = state.amplitudes();
    // σ_i^α|ψ⟩ for every (i, α).
    let images: Vec<Vec<num_complex::Complex64>> = (0..3 * l)
        .into_par_iter()
        .map(|k| apply_pauli(state, k / 3 + 1, Direction::ALL[k % 3]).expect("site in range"))
        .collect();
    let dot = |a: &[num_complex::Complex64], b: &[num_complex::Complex64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
    };
    let means: Vec<f64> = images.iter().map(|v| dot(psi, v)).collect();
    let pairs: Vec<(usize, usize)> = (0..3 * l)
        .flat_map(|a| (a..3 * l).map(move |b| (a, b)))
        .filter(|(a, b)| a / 3 != b / 3)
        .collect();
    let cross: Vec<f64> = pairs
        .par_iter()
        .map(|&(a, b)| dot(&images[a], &images[b]) - means[a] * means[b])
        .collect();
    let mut gamma = DMatrix::zeros(3 * l, 3 * l);
    for (&(a, b), v) in pairs.iter().zip(cross) {
        gamma[(a, b)] = v;
        gamma[(b, a)] = v;
    }
    // Same-site blocks from σ^α σ^β + σ^β σ^α = 2δ_αβ.
    for i in 0..l {
        for a in 0..3 {
            for b in 0..3 {
                let delta = if a == b { 1.0 } else { 0.0 };
                gamma[(3 * i + a, 3 * i + b)] = delta - means[3 * i + a] * means[3 * i + b];
            }
        }
    }
    CovarianceMatrix { gamma, means }
}

/// `F_Q = n̂ᵀ Γ n̂` for the observable defined by `dirs`.
pub fn qfi_for_direction(state: &StateVector, dirs: &DirectionField) -> Result<f64> {
    if dirs.num_sites() != state.num_sites() {
        return Err(Error::Argument(format!(
            "{} directions for {} sites",
            dirs.num_sites(),
            state.num_sites()
        )));
    }
    covariance_matrix(state).quadratic_form(dirs)
}

/// `κ(k) = ⌊L/k⌋k² + (L − ⌊L/k⌋k)²`.
pub fn producibility_bound(num_sites: usize, k: usize) -> Result<usize> {
    if k == 0 || k > num_sites {
        return Err(Error::Argument(format!(
            "cluster size {k} outside 1..={num_sites}"
        )));
    }
    let full = num_sites / k;
    let rem = num_sites - full * k;
    Ok(full * k * k + rem * rem)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub k: usize,
    pub kappa: usize,
    pub violated: bool,
}

pub fn bound_table(f_q: f64, num_sites: usize, slack: f64) -> Vec<BoundEntry> {
    (1..=num_sites)
        .map(|k| {
            let kappa = producibility_bound(num_sites, k).expect("k in range");
            BoundEntry {
                k,
                kappa,
                violated: f_q > kappa as f64 + slack,
            }
        })
        .collect()
}

/// `k + 1` for the largest violated `κ(k)`, or 1 when no bound is exceeded.
pub fn entanglement_depth(f_q: f64, num_sites: usize, slack: f64) -> usize {
    bound_table(f_q, num_sites, slack)
        .iter()
        .filter(|e| e.violated)
        .map(|e| e.k + 1)
        .max()
        .unwrap_or(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QfiOptions {
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
    /// A bound counts as violated only when exceeded by more than this.
    pub slack: f64,
}

impl Default for QfiOptions {
    fn default() -> Self {
        QfiOptions {
            restarts: 32,
            max_iter: 300,
            tol: 1e-12,
            seed: 0,
            slack: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QfiResult {
    pub f_q: f64,
    pub direction: DirectionField,
    pub depth: usize,
    pub bound_table: Vec<BoundEntry>,
    /// False when no restart converged; `f_q` is then the best unconverged value.
    pub converged: bool,
}

impl QfiResult {
    pub fn violated_ks(&self) -> Vec<usize> {
        self.bound_table.iter().filter(|e| e.violated).map(|e| e.k).collect()
    }
}

fn random_unit<R: Rng>(rng: &mut R) -> [f64; 3] {
    let z: f64 = 1.0 - 2.0 * rng.random::<f64>();
    let phi = std::f64::consts::TAU * rng.random::<f64>();
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// Site blocks of the leading eigenvector of `Γ`, each normalized.
fn spectral_start(cov: &CovarianceMatrix) -> Vec<[f64; 3]> {
    let eig = SymmetricEigen::new(cov.gamma().clone());
    let top = eig.eigenvalues.imax();
    let v = eig.eigenvectors.column(top);
    (0..cov.num_sites())
        .map(|i| {
            let b = [v[3 * i], v[3 * i + 1], v[3 * i + 2]];
            let n = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
            if n > 1e-8 {
                [b[0] / n, b[1] / n, b[2] / n]
            } else {
                [0.0, 0.0, 1.0]
            }
        })
        .collect()
}

pub fn maximize_qfi(state: &StateVector, options: &QfiOptions) -> Result<QfiResult> {
    maximize_qfi_from_covariance(&covariance_matrix(state), options)
}

/// Best of `restarts` block-ascent runs. Run 0 starts from the leading eigenvector of `Γ`;
/// the rest start from independent uniformly random directions.
pub fn maximize_qfi_from_covariance(cov: &CovarianceMatrix, options: &QfiOptions) -> Result<QfiResult> {
    if options.restarts == 0 {
        return Err(Error::Argument("QFI maximization needs at least one restart".into()));
    }
    let l = cov.num_sites();
    let traces: Vec<AscentTrace> = (0..options.restarts)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 {
                spectral_start(cov)
            } else {
                let mut rng = seed::rng(options.seed, r as u64);
                (0..l).map(|_| random_unit(&mut rng)).collect()
            };
            block_ascent(cov, &start, options.max_iter, options.tol)
        })
        .collect();
    let pick = |converged_only: bool| {
        traces
            .iter()
            .filter(|t| !converged_only || t.converged)
            .fold(None::<&AscentTrace>, |best, t| match best {
                Some(b) if b.f_q >= t.f_q => Some(b),
                _ => Some(t),
            })
    };
    let best = pick(true).or_else(|| pick(false)).expect("restarts ≥ 1");
    let table = bound_table(best.f_q, l, options.slack);
    Ok(QfiResult {
        f_q: best.f_q,
        direction: DirectionField::new(best.direction.clone())?,
        depth: entanglement_depth(best.f_q, l, options.slack),
        bound_table: table,
        converged: best.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{make_ghz, make_polarized_state, make_psi_o, Axis};
    use approx::assert_abs_diff_eq;

    #[test]
    fn covariance_of_polarized_site() {
        let s = make_polarized_state(1, Axis::Z_PLUS).unwrap();
        let c = covariance_matrix(&s);
        assert_eq!(c.magnetization(1), [0.0, 0.0, 1.0]);
        let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0, 0.0]));
        assert!((c.gamma() - expected).norm() < 1e-12);
    }

    #[test]
    fn direction_examples() {
        let p = make_polarized_state(6, Axis::Z_PLUS).unwrap();
        let x = DirectionField::along(6, Direction::X);
        assert_abs_diff_eq!(qfi_for_direction(&p, &x).unwrap(), 6.0, epsilon = 1e-12);
        let g = make_ghz(6, Direction::Z).unwrap();
        let z = DirectionField::along(6, Direction::Z);
        assert_abs_diff_eq!(qfi_for_direction(&g, &z).unwrap(), 36.0, epsilon = 1e-12);
        let psi = make_psi_o(6).unwrap();
        assert_abs_diff_eq!(qfi_for_direction(&psi, &z).unwrap(), 18.0, epsilon = 1e-12);
        let bell = make_ghz(2, Direction::Z).unwrap();
        assert_abs_diff_eq!(
            qfi_for_direction(&bell, &DirectionField::along(2, Direction::Z)).unwrap(),
            4.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn diagonal_block_traces() {
        let g = make_ghz(4, Direction::Y).unwrap();
        let c = covariance_matrix(&g);
        for i in 0..4 {
            let tr: f64 = (0..3).map(|a| c.gamma()[(3 * i + a, 3 * i + a)]).sum();
            assert!((2.0..=3.0 + 1e-12).contains(&tr));
        }
    }

    #[test]
    fn direction_validation() {
        assert!(matches!(
            DirectionField::new(vec![[1.0, 1.0, 0.0]]),
            Err(Error::Validation(_))
        ));
        let p = make_polarized_state(3, Axis::Z_PLUS).unwrap();
        assert!(qfi_for_direction(&p, &DirectionField::along(2, Direction::X)).is_err());
    }

    #[test]
    fn bounds_and_depth() {
        assert_eq!(producibility_bound(10, 1).unwrap(), 10);
        assert_eq!(producibility_bound(10, 2).unwrap(), 20);
        assert_eq!(producibility_bound(10, 3).unwrap(), 28);
        assert_eq!(producibility_bound(10, 10).unwrap(), 100);
        assert!(producibility_bound(10, 0).is_err());
        assert!(producibility_bound(10, 11).is_err());
        assert_eq!(entanglement_depth(100.0, 10, 1e-8), 10);
        assert_eq!(entanglement_depth(10.0, 10, 1e-8), 1);
        assert_eq!(entanglement_depth(20.0, 10, 1e-8), 2);
    }

    #[test]
    fn maximized_examples() {
        let opts = QfiOptions::default();
        let g = make_ghz(6, Direction::Y).unwrap();
        let r = maximize_qfi(&g, &opts).unwrap();
        assert_abs_diff_eq!(r.f_q, 36.0, epsilon = 1e-6);
        assert_eq!(r.depth, 6);
        assert!(r.converged);
        let psi = make_psi_o(4).unwrap();
        let r = maximize_qfi(&psi, &opts).unwrap();
        assert_abs_diff_eq!(r.f_q, 8.0, epsilon = 1e-6);
        assert_eq!(r.violated_ks(), vec![1]);
        assert_eq!(r.depth, 2);
    }
}
