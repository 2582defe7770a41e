//! Block-coordinate ascent for `max nᵀΓn` subject to `|n_i| = 1` for every site.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use super::CovarianceMatrix;

/// Eigenvalues within this (relative) distance of the largest share its eigenspace.
const DEGENERACY: f64 = 1e-12;
/// Projections onto the top eigenspace below this are treated as exactly zero.
const HARD_CASE: f64 = 1e-13;

fn objective(a: &Matrix3<f64>, b: &Vector3<f64>, n: &Vector3<f64>) -> f64 {
    n.dot(&(a * n)) + 2.0 * b.dot(n)
}

/// Global maximizer of `nᵀAn + 2bᵀn` over the unit sphere, `A` symmetric.
///
/// The stationarity condition is `(μI − A)n = b` with `μ ≥ w_max`. In the eigenbasis of `A`
/// this is the secular equation `Σ β_k² / (μ − w_k)² = 1`, whose left side decreases
/// monotonically on `μ > w_max`; the root is bracketed by `w_max + |β_top|` and
/// `w_max + |b|`. When `b` has no component in the top eigenspace the root may sit at
/// `μ = w_max`, and the remaining norm is filled along the top eigenspace.
pub fn maximize_on_sphere(a: &Matrix3<f64>, b: &Vector3<f64>) -> Vector3<f64> {
    let eig = SymmetricEigen::new(*a);
    let w = eig.eigenvalues;
    let q = eig.eigenvectors;
    let beta = q.transpose() * b;
    let w_max = w.max();
    let scale = 1.0 + w.amax() + b.norm();
    let top: Vec<usize> = (0..3).filter(|&k| w_max - w[k] <= DEGENERACY * scale).collect();
    let beta_top = top.iter().map(|&k| beta[k] * beta[k]).sum::<f64>().sqrt();

    let assemble = |mu: f64| -> Vector3<f64> {
        let mut n = Vector3::zeros();
        for k in (0..3).filter(|&k| beta[k] != 0.0) {
            n += q.column(k) * (beta[k] / (mu - w[k]));
        }
        n
    };
    let secular = |mu: f64| -> f64 {
        (0..3)
            .filter(|&k| beta[k] != 0.0)
            .map(|k| {
                let d = mu - w[k];
                beta[k] * beta[k] / (d * d)
            })
            .sum()
    };

    if beta_top <= HARD_CASE * scale {
        // Non-top components at μ = w_max; if they fit inside the sphere, the top eigenspace
        // absorbs the rest of the norm.
        let mut r = Vector3::zeros();
        for k in (0..3).filter(|k| !top.contains(k)) {
            r += q.column(k) * (beta[k] / (w_max - w[k]));
        }
        let rn2 = r.norm_squared();
        if rn2 <= 1.0 {
            let k = top[0];
            let fill = (1.0 - rn2).sqrt();
            let n = r + q.column(k) * fill;
            return n / n.norm();
        }
    }

    let mut lo = w_max + beta_top;
    let mut hi = w_max + b.norm();
    if secular(lo).is_nan() || secular(lo) < 1.0 {
        // Only reachable in the hard case with an outside-sphere residual: the root lies
        // strictly above w_max.
        lo = w_max;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mid > w_max && secular(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let n = assemble(hi);
    let norm = n.norm();
    if norm > 0.0 && norm.is_finite() {
        n / norm
    } else {
        q.column(top[0]).into_owned()
    }
}

/// One block-ascent run.
#[derive(Clone, Debug, PartialEq)]
pub struct AscentTrace {
    pub f_q: f64,
    /// One unit vector per site.
    pub direction: Vec<[f64; 3]>,
    /// Objective value after every block update, starting from the initial value.
    pub history: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

/// Ascends from `start` by solving each site's sphere subproblem exactly, until a full sweep
/// improves the objective by less than `tol·max(1, F)`.
pub fn block_ascent(cov: &CovarianceMatrix, start: &[[f64; 3]], max_iter: usize, tol: f64) -> AscentTrace {
    let l = cov.num_sites();
    assert_eq!(start.len(), l, "one direction per site");
    let g = cov.gamma();
    let mut n: Vec<Vector3<f64>> = start
        .iter()
        .map(|v| Vector3::from(*v).normalize())
        .collect();
    let block = |i: usize, j: usize| -> Matrix3<f64> { g.fixed_view::<3, 3>(3 * i, 3 * j).into_owned() };
    let diag: Vec<Matrix3<f64>> = (0..l).map(|i| block(i, i)).collect();
    let value = |n: &[Vector3<f64>]| -> f64 {
        let mut f = 0.0;
        for i in 0..l {
            for j in 0..l {
                f += n[i].dot(&(block(i, j) * n[j]));
            }
        }
        f
    };
    let mut f = value(&n);
    let mut history = vec![f];
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < max_iter {
        sweeps += 1;
        let before = f;
        for i in 0..l {
            let mut b = Vector3::zeros();
            for j in (0..l).filter(|&j| j != i) {
                b += block(i, j) * n[j];
            }
            let rest = f - objective(&diag[i], &b, &n[i]);
            let candidate = maximize_on_sphere(&diag[i], &b);
            let gain = objective(&diag[i], &b, &candidate);
            if gain + rest >= f {
                n[i] = candidate;
                f = gain + rest;
            }
            history.push(f);
        }
        if f - before < tol * f.abs().max(1.0) {
            converged = true;
            break;
        }
    }
    // Recompute once to shed accumulated update drift.
    let f_q = value(&n).max(0.0);
    AscentTrace {
        f_q,
        direction: n.iter().map(|v| [v[0], v[1], v[2]]).collect(),
        history,
        sweeps,
        converged,
    }
}
