//! Geometric measure `E_g = 1 − Λ²` with `Λ = max |⟨Φ|ψ⟩|` over product states `Φ`.
//!
//! `Λ` is the injective norm of the amplitude tensor. We compute it by higher-order power
//! iteration: holding every factor but site `i` fixed, the overlap is maximized exactly by
//! the normalized contraction of `ψ` with the other factors, and the achieved overlap is the
//! norm of that contraction. Each local update therefore never decreases `Λ`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::StateVector;
use crate::error::{Error, Result};
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeometricOptions {
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for GeometricOptions {
    fn default() -> Self {
        GeometricOptions {
            restarts: 64,
            max_iter: 500,
            tol: 1e-12,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeometricResult {
    pub lambda: f64,
    pub e_g: f64,
    /// Maximizing product state, one unit 2-vector per site.
    pub product_state: Vec<[Complex64; 2]>,
    pub restarts_used: usize,
    pub converged: bool,
}

/// Outcome of a single power-iteration run.
#[derive(Clone, Debug, PartialEq)]
pub struct RestartTrace {
    pub lambda: f64,
    /// Overlap after every local update, starting with the initial overlap.
    pub history: Vec<f64>,
    pub product_state: Vec<[Complex64; 2]>,
    pub sweeps: usize,
    pub converged: bool,
}

/// Contracts `ψ` with `conj(φ_j)` for every site `j ≠ keep`, leaving a 2-vector on `keep`.
fn contract_except(amps: &[Complex64], factors: &[[Complex64; 2]], keep: usize, buf: &mut Vec<Complex64>) -> [Complex64; 2] {
    let l = factors.len();
    buf.clear();
    buf.extend_from_slice(amps);
    let mut len = buf.len();
    // Trailing sites are the low-order bits.
    for site in (keep + 1..=l).rev() {
        let [c0, c1] = factors[site - 1].map(|c| c.conj());
        len /= 2;
        for a in 0..len {
            buf[a] = c0 * buf[2 * a] + c1 * buf[2 * a + 1];
        }
    }
    for site in 1..keep {
        let [c0, c1] = factors[site - 1].map(|c| c.conj());
        len /= 2;
        for a in 0..len {
            buf[a] = c0 * buf[a] + c1 * buf[a + len];
        }
    }
    debug_assert_eq!(len, 2);
    [buf[0], buf[1]]
}

fn overlap(amps: &[Complex64], factors: &[[Complex64; 2]], buf: &mut Vec<Complex64>) -> f64 {
    let v = contract_except(amps, factors, 1, buf);
    let f = factors[0];
    (f[0].conj() * v[0] + f[1].conj() * v[1]).norm()
}

/// Optimal factor for `site` (1-based) given the others, and the overlap it achieves.
pub fn local_update(state: &StateVector, factors: &[[Complex64; 2]], site: usize) -> Result<([Complex64; 2], f64)> {
    if factors.len() != state.num_sites() {
        return Err(Error::Argument("one factor per site required".into()));
    }
    if site == 0 || site > factors.len() {
        return Err(Error::Index {
            site,
            num_sites: factors.len(),
        });
    }
    let mut buf = Vec::with_capacity(state.dim());
    Ok(update_site(state.amplitudes(), factors, site, &mut buf))
}

fn update_site(amps: &[Complex64], factors: &[[Complex64; 2]], site: usize, buf: &mut Vec<Complex64>) -> ([Complex64; 2], f64) {
    let v = contract_except(amps, factors, site, buf);
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if norm > 0.0 {
        ([v[0] / norm, v[1] / norm], norm)
    } else {
        (factors[site - 1], 0.0)
    }
}

/// Alternating maximization from `start` until a sweep improves `Λ` by less than `tol`.
pub fn power_iteration(state: &StateVector, start: Vec<[Complex64; 2]>, max_iter: usize, tol: f64) -> Result<RestartTrace> {
    let l = state.num_sites();
    if start.len() != l {
        return Err(Error::Argument(format!(
            "{} factors supplied for {l} sites",
            start.len()
        )));
    }
    let amps = state.amplitudes();
    let mut buf = Vec::with_capacity(amps.len());
    let mut factors: Vec<[Complex64; 2]> = start
        .into_iter()
        .map(|f| {
            let n = (f[0].norm_sqr() + f[1].norm_sqr()).sqrt();
            [f[0] / n, f[1] / n]
        })
        .collect();
    let mut lambda = overlap(amps, &factors, &mut buf);
    let mut history = vec![lambda];
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < max_iter {
        sweeps += 1;
        let before = lambda;
        for site in 1..=l {
            let (f, achieved) = update_site(amps, &factors, site, &mut buf);
            factors[site - 1] = f;
            lambda = achieved;
            history.push(lambda);
        }
        if lambda - before < tol {
            converged = true;
            break;
        }
    }
    Ok(RestartTrace {
        lambda,
        history,
        product_state: factors,
        sweeps,
        converged,
    })
}

fn random_factor<R: Rng>(rng: &mut R) -> [Complex64; 2] {
    // Uniform on the Bloch sphere.
    let cos_theta: f64 = 1.0 - 2.0 * rng.random::<f64>();
    let phi = TAU * rng.random::<f64>();
    let half = cos_theta.clamp(-1.0, 1.0).acos() / 2.0;
    [
        Complex64::new(half.cos(), 0.0),
        Complex64::from_polar(half.sin(), phi),
    ]
}

fn basis_factors(num_sites: usize, index: usize) -> Vec<[Complex64; 2]> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    (1..=num_sites)
        .map(|site| {
            if (index >> (num_sites - site)) & 1 == 0 {
                [one, zero]
            } else {
                [zero, one]
            }
        })
        .collect()
}

/// Best `Λ` over `restarts` runs. Run 0 starts from the largest-amplitude basis state, so the
/// result is never below `max_j |ψ_j|`; the others start from uniformly random product states.
pub fn geometric_measure(state: &StateVector, options: &GeometricOptions) -> Result<GeometricResult> {
    if options.restarts == 0 {
        return Err(Error::Argument("geometric measure needs at least one restart".into()));
    }
    let l = state.num_sites();
    let traces: Vec<RestartTrace> = (0..options.restarts)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 {
                basis_factors(l, state.max_amplitude().0)
            } else {
                let mut rng = seed::rng(options.seed, r as u64);
                (0..l).map(|_| random_factor(&mut rng)).collect()
            };
            power_iteration(state, start, options.max_iter, options.tol)
        })
        .collect::<Result<_>>()?;
    let best = traces
        .into_iter()
        .reduce(|a, b| if b.lambda > a.lambda { b } else { a })
        .expect("restarts ≥ 1");
    let lambda = best.lambda.min(1.0);
    Ok(GeometricResult {
        lambda,
        e_g: 1.0 - lambda * lambda,
        product_state: best.product_state,
        restarts_used: options.restarts,
        converged: best.converged,
    })
}
