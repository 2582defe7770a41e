use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{Direction, StateVector, ONE, ZERO};
use crate::error::{Error, Result};

/// Row-major single-site operator.
pub type Gate2 = [[Complex64; 2]; 2];

pub const HADAMARD: Gate2 = [
    [
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(FRAC_1_SQRT_2, 0.0),
    ],
    [
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(-FRAC_1_SQRT_2, 0.0),
    ],
];

/// Applies `gate` to `site` (1-based, site 1 = most significant bit) in place.
pub fn apply_single_site(amps: &mut [Complex64], num_sites: usize, site: usize, gate: &Gate2) {
    debug_assert!(site >= 1 && site <= num_sites);
    let stride = 1usize << (num_sites - site);
    let block = stride << 1;
    for base in (0..amps.len()).step_by(block) {
        for i in base..base + stride {
            let a0 = amps[i];
            let a1 = amps[i + stride];
            amps[i] = gate[0][0] * a0 + gate[0][1] * a1;
            amps[i + stride] = gate[1][0] * a0 + gate[1][1] * a1;
        }
    }
}

/// `exp(−i·angle·σ^α) = cos(angle)·I − i·sin(angle)·σ^α`.
pub fn rotation_gate(direction: Direction, angle: f64) -> Gate2 {
    let (s, c) = angle.sin_cos();
    let p = direction.pauli();
    let mi_s = Complex64::new(0.0, -s);
    let mut g = [[ZERO; 2]; 2];
    for r in 0..2 {
        for k in 0..2 {
            let id = if r == k { ONE * c } else { ZERO };
            g[r][k] = id + mi_s * p[r][k];
        }
    }
    g
}

pub(crate) fn matmul2(a: &Gate2, b: &Gate2) -> Gate2 {
    let mut g = [[ZERO; 2]; 2];
    for r in 0..2 {
        for k in 0..2 {
            g[r][k] = a[r][0] * b[0][k] + a[r][1] * b[1][k];
        }
    }
    g
}

fn check_site(state: &StateVector, site: usize) -> Result<()> {
    if site == 0 || site > state.num_sites() {
        return Err(Error::Index {
            site,
            num_sites: state.num_sites(),
        });
    }
    Ok(())
}

/// Returns `exp(−i·angle·σ^α_site)|ψ⟩`.
pub fn apply_site_rotation(
    state: &StateVector,
    site: usize,
    direction: Direction,
    angle: f64,
) -> Result<StateVector> {
    check_site(state, site)?;
    let mut amps = state.amplitudes().to_vec();
    apply_single_site(&mut amps, state.num_sites(), site, &rotation_gate(direction, angle));
    Ok(StateVector::from_raw(state.num_sites(), amps))
}

/// Returns `σ^α_site|ψ⟩` as raw amplitudes (the result is normalized, σ being unitary).
pub fn apply_pauli(state: &StateVector, site: usize, direction: Direction) -> Result<Vec<Complex64>> {
    check_site(state, site)?;
    let mut amps = state.amplitudes().to_vec();
    apply_single_site(&mut amps, state.num_sites(), site, &direction.pauli());
    Ok(amps)
}
