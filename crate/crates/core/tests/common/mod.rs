//! Independent reference implementations shared by the integration and acceptance tests.
//!
//! Nothing here calls the optimizers or the matrix-free evolution under test: operators are
//! assembled from Kronecker products and exponentiated by Hermitian eigendecomposition, and
//! optima are found by grid search plus closed-form inner problems.
#![allow(dead_code)]

use std::f64::consts::PI;

use floquet_ent::chain::StateVector;
use floquet_ent::floquet::{Boundary, FloquetSpec, Model};
use floquet_ent::Complex64;
use nalgebra::{DMatrix, Matrix2, Matrix3, Matrix6, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian-amplitude random state.
pub fn random_state(l: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let amps: Vec<Complex64> = (0..1usize << l)
        .map(|_| {
            // Box-Muller
            let u1: f64 = rng.random::<f64>().max(1e-300);
            let u2: f64 = rng.random();
            let r = (-2.0 * u1.ln()).sqrt();
            c(r * (2.0 * PI * u2).cos(), r * (2.0 * PI * u2).sin())
        })
        .collect();
    StateVector::normalized(l, amps).unwrap()
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

// ---------------------------------------------------------------------------------------
// Dense operators

pub fn pauli(k: usize) -> DMatrix<Complex64> {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match k {
        0 => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        1 => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        2 => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => DMatrix::identity(2, 2),
    }
}

/// `⊗_j P_j` with `ops[site] = pauli index` and identity elsewhere; site 1 is leftmost.
pub fn pauli_string(l: usize, ops: &[(usize, usize)]) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for site in 1..=l {
        let k = ops.iter().find(|(s, _)| *s == site).map_or(3, |(_, k)| *k);
        m = m.kronecker(&pauli(k));
    }
    m
}

pub fn field(l: usize, k: usize) -> DMatrix<Complex64> {
    let d = 1 << l;
    (1..=l).fold(DMatrix::zeros(d, d), |acc, s| acc + pauli_string(l, &[(s, k)]))
}

pub fn ising_xx(l: usize, boundary: Boundary) -> DMatrix<Complex64> {
    let d = 1 << l;
    let mut h = DMatrix::zeros(d, d);
    for i in 1..l {
        h += pauli_string(l, &[(i, 0), (i + 1, 0)]);
    }
    if boundary == Boundary::Closed {
        h += pauli_string(l, &[(l, 0), (1, 0)]);
    }
    h
}

/// `exp(−i·t·H)` for Hermitian `H`.
pub fn expm_hermitian(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|w| Complex64::from_polar(1.0, -t * w)));
    v * phases * v.adjoint()
}

/// The Floquet operator assembled from explicit exponentials.
pub fn dense_floquet(spec: &FloquetSpec) -> DMatrix<Complex64> {
    let l = spec.num_sites;
    let t = PI / 4.0;
    let hxx = ising_xx(l, spec.boundary);
    match spec.model {
        Model::U0 => expm_hermitian(&hxx, t) * expm_hermitian(&field(l, 2), t),
        Model::Ux => expm_hermitian(&(hxx + field(l, 0)), t) * expm_hermitian(&field(l, 1), t),
    }
}

pub fn apply(m: &DMatrix<Complex64>, s: &StateVector) -> Vec<Complex64> {
    let v = nalgebra::DVector::from_column_slice(s.amplitudes());
    (m * v).iter().copied().collect()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `4·Var(½ Σ n̂_i·σ⃗_i)` by direct operator application.
pub fn direct_qfi(s: &StateVector, dirs: &[[f64; 3]]) -> f64 {
    let l = s.num_sites();
    let d = 1 << l;
    let mut o = DMatrix::<Complex64>::zeros(d, d);
    for (i, n) in dirs.iter().enumerate() {
        for (k, nk) in n.iter().enumerate() {
            o += pauli_string(l, &[(i + 1, k)]) * c(0.5 * nk, 0.0);
        }
    }
    let v = nalgebra::DVector::from_column_slice(s.amplitudes());
    let ov = &o * &v;
    let mean = v.dotc(&ov).re;
    let second = ov.dotc(&ov).re;
    4.0 * (second - mean * mean)
}

// ---------------------------------------------------------------------------------------
// Geometric measure oracle

fn bloch(theta: f64, phi: f64) -> [Complex64; 2] {
    [c((theta / 2.0).cos(), 0.0), Complex64::from_polar((theta / 2.0).sin(), phi)]
}

/// Largest singular value of a 2×2 complex matrix.
fn sigma_max(m: [[Complex64; 2]; 2]) -> f64 {
    let a = Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1]);
    let g = a.adjoint() * a;
    let p = g[(0, 0)].re;
    let q = g[(1, 1)].re;
    let r = g[(0, 1)].norm_sqr();
    let top = 0.5 * (p + q) + (0.25 * (p - q) * (p - q) + r).sqrt();
    top.max(0.0).sqrt()
}

/// Exact for L = 2; for L = 3 a grid over site 1 (step `π/200`) with the remaining two-site
/// problem solved exactly.
pub fn geometric_oracle(s: &StateVector) -> f64 {
    let a = s.amplitudes();
    match s.num_sites() {
        1 => 1.0,
        2 => sigma_max([[a[0], a[1]], [a[2], a[3]]]),
        3 => {
            let steps = 200;
            let mut best = 0.0f64;
            for i in 0..=steps {
                let theta = PI * i as f64 / steps as f64;
                for j in 0..2 * steps {
                    let phi = PI * j as f64 / steps as f64;
                    let f = bloch(theta, phi);
                    let m = [
                        [
                            f[0].conj() * a[0] + f[1].conj() * a[4],
                            f[0].conj() * a[1] + f[1].conj() * a[5],
                        ],
                        [
                            f[0].conj() * a[2] + f[1].conj() * a[6],
                            f[0].conj() * a[3] + f[1].conj() * a[7],
                        ],
                    ];
                    best = best.max(sigma_max(m));
                    if i == 0 || i == steps {
                        break;
                    }
                }
            }
            best
        }
        l => panic!("geometric oracle supports L ≤ 3, got {l}"),
    }
}

// ---------------------------------------------------------------------------------------
// QFI oracle

/// `Γ` from `direct_qfi`-style operator expectation values.
pub fn dense_gamma(s: &StateVector) -> DMatrix<f64> {
    let l = s.num_sites();
    let v = nalgebra::DVector::from_column_slice(s.amplitudes());
    let ops: Vec<DMatrix<Complex64>> = (0..3 * l)
        .map(|k| pauli_string(l, &[(k / 3 + 1, k % 3)]))
        .collect();
    let means: Vec<f64> = ops.iter().map(|o| v.dotc(&(o * &v)).re).collect();
    DMatrix::from_fn(3 * l, 3 * l, |a, b| {
        let ab = &ops[a] * &ops[b];
        let ba = &ops[b] * &ops[a];
        0.5 * v.dotc(&((ab + ba) * &v)).re - means[a] * means[b]
    })
}

/// `max nᵀAn + 2bᵀn` over the unit sphere from the largest real eigenvalue of the 6×6
/// linearization `[[A, I], [bbᵀ, A]]`.
pub fn sphere_max_linearized(a: &Matrix3<f64>, b: &Vector3<f64>) -> f64 {
    let mut m = Matrix6::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(a);
    m.fixed_view_mut::<3, 3>(0, 3).copy_from(&Matrix3::identity());
    m.fixed_view_mut::<3, 3>(3, 0).copy_from(&(b * b.transpose()));
    m.fixed_view_mut::<3, 3>(3, 3).copy_from(a);
    let eig = m.complex_eigenvalues();
    let mu = eig
        .iter()
        .filter(|z| z.im.abs() < 1e-7)
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    // At the optimum (μI − A)n = b, so f = nᵀAn + 2bᵀn = μ + bᵀn.
    let shifted = Matrix3::identity() * mu - a;
    match shifted.try_inverse() {
        Some(inv) => {
            let n = inv * b;
            if (n.norm() - 1.0).abs() < 1e-4 {
                return mu + b.dot(&n);
            }
            fallback_sphere_grid(a, b)
        }
        None => fallback_sphere_grid(a, b),
    }
}

fn fallback_sphere_grid(a: &Matrix3<f64>, b: &Vector3<f64>) -> f64 {
    let steps = 300;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=steps {
        let t = PI * i as f64 / steps as f64;
        for j in 0..2 * steps {
            let p = PI * j as f64 / steps as f64;
            let n = Vector3::new(t.sin() * p.cos(), t.sin() * p.sin(), t.cos());
            best = best.max(n.dot(&(a * n)) + 2.0 * b.dot(&n));
        }
    }
    best
}

fn sphere_points(step: f64, center: Option<(f64, f64)>, radius: f64) -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    match center {
        None => {
            let nt = (PI / step).round() as usize;
            for i in 0..=nt {
                let t = PI * i as f64 / nt as f64;
                let np = if i == 0 || i == nt { 1 } else { 2 * nt };
                for j in 0..np {
                    pts.push((t, PI * j as f64 / nt as f64));
                }
            }
        }
        Some((t0, p0)) => {
            let k = (radius / step).ceil() as i64;
            for i in -k..=k {
                for j in -k..=k {
                    pts.push((t0 + i as f64 * step, p0 + j as f64 * step));
                }
            }
        }
    }
    pts
}

fn unit(tp: (f64, f64)) -> Vector3<f64> {
    Vector3::new(tp.0.sin() * tp.1.cos(), tp.0.sin() * tp.1.sin(), tp.0.cos())
}

fn block(g: &DMatrix<f64>, i: usize, j: usize) -> Matrix3<f64> {
    g.fixed_view::<3, 3>(3 * i, 3 * j).into_owned()
}

/// Maximum of `nᵀΓn` with all but the last site on the given directions and the last
/// solved exactly.
fn last_site_max(g: &DMatrix<f64>, fixed: &[Vector3<f64>]) -> f64 {
    let l = fixed.len() + 1;
    let last = l - 1;
    let mut c0 = 0.0;
    let mut b = Vector3::zeros();
    for i in 0..fixed.len() {
        for j in 0..fixed.len() {
            c0 += fixed[i].dot(&(block(g, i, j) * fixed[j]));
        }
        b += block(g, last, i) * fixed[i];
    }
    c0 + sphere_max_linearized(&block(g, last, last), &b)
}

/// Brute-force `max F_Q` for L ≤ 3: spherical grids at step `π/100` over all sites but the
/// last (for L = 3 a coarse `π/20` scan refined at `π/100`), last site exact.
pub fn qfi_oracle(s: &StateVector) -> f64 {
    let g = dense_gamma(s);
    let fine = PI / 100.0;
    match s.num_sites() {
        1 => {
            let eig = Matrix3::from_iterator(g.iter().copied()).symmetric_eigenvalues();
            eig.max()
        }
        2 => sphere_points(fine, None, 0.0)
            .into_iter()
            .map(|p| last_site_max(&g, &[unit(p)]))
            .fold(f64::NEG_INFINITY, f64::max),
        3 => {
            let coarse = PI / 20.0;
            let pts = sphere_points(coarse, None, 0.0);
            let mut scored = Vec::new();
            for &p in &pts {
                for &q in &pts {
                    scored.push((last_site_max(&g, &[unit(p), unit(q)]), p, q));
                }
            }
            scored.sort_by(|a, b| b.0.total_cmp(&a.0));
            let mut best = scored[0].0;
            for &(_, p, q) in scored.iter().take(4) {
                let local_p = sphere_points(fine, Some(p), coarse);
                let local_q = sphere_points(fine, Some(q), coarse);
                for &pp in &local_p {
                    for &qq in &local_q {
                        best = best.max(last_site_max(&g, &[unit(pp), unit(qq)]));
                    }
                }
            }
            best
        }
        l => panic!("QFI oracle supports L ≤ 3, got {l}"),
    }
}

// ---------------------------------------------------------------------------------------
// Combinatorics

pub fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Mean number of pairs cut by a uniformly random size-`l` subset of `L` sites, when the
/// sites are perfectly paired: each Bell pair contributes one bit when exactly one of its
/// sites is in the subset.
pub fn broken_pair_aee(num_sites: usize, l: usize) -> f64 {
    let pairs = num_sites / 2;
    let cut = 2.0 * binomial(num_sites - 2, l - 1) / binomial(num_sites, l);
    pairs as f64 * cut
}

/// The same average by explicit enumeration of subsets against a given pairing.
pub fn broken_pair_aee_enumerated(num_sites: usize, l: usize, pairing: &[(usize, usize)]) -> f64 {
    let mut total = 0usize;
    let mut count = 0usize;
    for mask in 0u32..(1 << num_sites) {
        if mask.count_ones() as usize != l {
            continue;
        }
        let inside = |s: usize| mask >> (s - 1) & 1 == 1;
        total += pairing.iter().filter(|(a, b)| inside(*a) != inside(*b)).count();
        count += 1;
    }
    total as f64 / count as f64
}
