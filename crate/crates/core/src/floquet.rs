//! One-period maps of the kicked Ising chains.
//!
//! Both models alternate a global single-site kick with the Ising interaction, which is
//! diagonal in the σ^x basis:
//!
//! * `U0 = exp(−iπ/4·Hxx) · exp(−iπ/4·Hz)`
//! * `Ux = exp(−iπ/4·(Hxx + Hx)) · exp(−iπ/4·Hy)`, or equivalently in the split form
//!   `exp(−iπ/4·Hxx) · exp(−iπ/4·Hz) · exp(−iπ/4·Hx)`.
//!
//! The rightmost factor acts first. Application is matrix-free: the kick is a product of
//! single-site gates and the Ising factor is a Hadamard sweep, a diagonal phase over the
//! x-basis spin configurations and a second Hadamard sweep.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{
    apply_single_site, check_sites, Direction, Gate2, StateVector, HADAMARD, ZERO,
};
use crate::chain::{gates::matmul2, rotation_gate};
use crate::error::{Error, Result};

/// Phase angle of every factor: period π/4 with unit coupling and unit fields.
pub const KICK_ANGLE: f64 = FRAC_PI_4;

/// Ising coupling and field strength. All terms of the Hamiltonian carry this weight.
pub const COUPLING: f64 = 1.0;

/// Largest chain for which dense operators are materialized.
pub const MAX_DENSE_SITES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Model {
    /// Transverse z kick, Ising interaction only.
    U0,
    /// Transverse y kick, Ising interaction plus longitudinal x field.
    Ux,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Boundary {
    Open,
    /// Adds the bond `(L, 1)`.
    Closed,
}

/// Which product form is used for `Ux`; ignored for `U0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factorization {
    /// `exp(−iπ/4·(Hxx + Hx)) · exp(−iπ/4·Hy)`.
    #[default]
    Combined,
    /// `exp(−iπ/4·Hxx) · exp(−iπ/4·Hz) · exp(−iπ/4·Hx)`.
    Split,
}

macro_rules! impl_enum_text {
    ($ty:ty, $($variant:path => $text:literal $(| $alt:literal)*),+ $(,)?) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($variant => $text),+ })
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($text $(| $alt)* => Ok($variant),)+
                    other => Err(Error::Argument(format!(
                        concat!("unrecognised ", stringify!($ty), " `{}`"), other
                    ))),
                }
            }
        }
    };
}

impl_enum_text!(Model, Model::U0 => "u0", Model::Ux => "ux");
impl_enum_text!(Boundary, Boundary::Open => "open", Boundary::Closed => "closed" | "periodic");
impl_enum_text!(Factorization, Factorization::Combined => "combined", Factorization::Split => "split");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FloquetSpec {
    pub model: Model,
    pub num_sites: usize,
    pub boundary: Boundary,
    pub factorization: Factorization,
}

impl FloquetSpec {
    pub fn new(model: Model, num_sites: usize, boundary: Boundary) -> Result<Self> {
        check_sites(num_sites, 2)?;
        Ok(FloquetSpec {
            model,
            num_sites,
            boundary,
            factorization: Factorization::Combined,
        })
    }

    pub fn with_factorization(mut self, factorization: Factorization) -> Self {
        self.factorization = factorization;
        self
    }

    /// Ising bonds `(i, j)`, 1-based.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let l = self.num_sites;
        let mut b: Vec<_> = (1..l).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Closed {
            b.push((l, 1));
        }
        b
    }

    fn has_longitudinal_field(&self) -> bool {
        self.model == Model::Ux && self.factorization == Factorization::Combined
    }

    /// The single-site gate applied to every site before the Ising factor.
    fn kick_gate(&self) -> Gate2 {
        match (self.model, self.factorization) {
            (Model::U0, _) => rotation_gate(Direction::Z, KICK_ANGLE),
            (Model::Ux, Factorization::Combined) => rotation_gate(Direction::Y, KICK_ANGLE),
            (Model::Ux, Factorization::Split) => matmul2(
                &rotation_gate(Direction::Z, KICK_ANGLE),
                &rotation_gate(Direction::X, KICK_ANGLE),
            ),
        }
    }
}

/// A compiled one-period map: the kick gate plus the diagonal Ising phases.
#[derive(Clone, Debug)]
pub struct Floquet {
    spec: FloquetSpec,
    kick: Gate2,
    ising_phases: Vec<Complex64>,
}

impl Floquet {
    pub fn new(spec: FloquetSpec) -> Result<Self> {
        check_sites(spec.num_sites, 2)?;
        let l = spec.num_sites;
        let bonds = spec.bonds();
        let field = spec.has_longitudinal_field();
        // In the Hadamard-rotated frame bit b at a site is the σ^x eigenvalue s = 1 − 2b.
        let ising_phases = (0..1usize << l)
            .map(|idx| {
                let spin = |site: usize| 1.0 - 2.0 * ((idx >> (l - site)) & 1) as f64;
                let mut energy: f64 = bonds.iter().map(|&(i, j)| spin(i) * spin(j)).sum();
                if field {
                    energy += (1..=l).map(spin).sum::<f64>();
                }
                Complex64::from_polar(1.0, -KICK_ANGLE * COUPLING * energy)
            })
            .collect();
        Ok(Floquet {
            spec,
            kick: spec.kick_gate(),
            ising_phases,
        })
    }

    pub fn spec(&self) -> &FloquetSpec {
        &self.spec
    }

    /// One period applied in place.
    pub fn step_in_place(&self, amps: &mut [Complex64]) {
        let l = self.spec.num_sites;
        for site in 1..=l {
            apply_single_site(amps, l, site, &self.kick);
        }
        for site in 1..=l {
            apply_single_site(amps, l, site, &HADAMARD);
        }
        for (a, p) in amps.iter_mut().zip(&self.ising_phases) {
            *a *= p;
        }
        for site in 1..=l {
            apply_single_site(amps, l, site, &HADAMARD);
        }
    }

    fn check(&self, state: &StateVector) -> Result<()> {
        if state.num_sites() != self.spec.num_sites {
            return Err(Error::Argument(format!(
                "state has {} sites, operator expects {}",
                state.num_sites(),
                self.spec.num_sites
            )));
        }
        Ok(())
    }

    /// `Uⁿ|ψ⟩`.
    pub fn evolve(&self, state: &StateVector, periods: usize) -> Result<StateVector> {
        self.check(state)?;
        let mut amps = state.amplitudes().to_vec();
        for _ in 0..periods {
            self.step_in_place(&mut amps);
        }
        Ok(StateVector::from_raw(state.num_sites(), amps))
    }

    /// The states `|ψ⟩, U|ψ⟩, …, U^{n_max}|ψ⟩`.
    pub fn trajectory(&self, state: &StateVector, n_max: usize) -> Result<Vec<StateVector>> {
        self.check(state)?;
        let mut out = Vec::with_capacity(n_max + 1);
        let mut amps = state.amplitudes().to_vec();
        out.push(state.clone());
        for _ in 0..n_max {
            self.step_in_place(&mut amps);
            out.push(StateVector::from_raw(state.num_sites(), amps.clone()));
        }
        Ok(out)
    }

    /// Materializes the operator column by column from the matrix-free kernel.
    pub fn to_dense(&self) -> Result<UnitaryMatrix> {
        let l = self.spec.num_sites;
        if l > MAX_DENSE_SITES {
            return Err(Error::Resource(format!(
                "dense Floquet operator limited to L ≤ {MAX_DENSE_SITES}, got {l}"
            )));
        }
        let dim = 1usize << l;
        let columns: Vec<Vec<Complex64>> = (0..dim)
            .into_par_iter()
            .map(|j| {
                let mut col = vec![ZERO; dim];
                col[j] = Complex64::new(1.0, 0.0);
                self.step_in_place(&mut col);
                col
            })
            .collect();
        let matrix = DMatrix::from_fn(dim, dim, |r, c| columns[c][r]);
        Ok(UnitaryMatrix { matrix })
    }
}

/// `Uⁿ|ψ⟩` for the operator described by `spec`.
pub fn apply_floquet(spec: &FloquetSpec, state: &StateVector, periods: usize) -> Result<StateVector> {
    Floquet::new(*spec)?.evolve(state, periods)
}

pub fn build_dense(spec: &FloquetSpec) -> Result<UnitaryMatrix> {
    if spec.num_sites > MAX_DENSE_SITES {
        return Err(Error::Resource(format!(
            "dense Floquet operator limited to L ≤ {MAX_DENSE_SITES}, got {}",
            spec.num_sites
        )));
    }
    Floquet::new(*spec)?.to_dense()
}

/// A square complex matrix expected to be unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    matrix: DMatrix<Complex64>,
}

impl UnitaryMatrix {
    /// Wraps a matrix after a randomized unitarity probe (see [`Self::probe_defect`]).
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Argument("unitary matrix must be square".into()));
        }
        let u = UnitaryMatrix { matrix };
        let defect = u.probe_defect();
        if defect > 1e-9 {
            return Err(Error::Validation(format!(
                "matrix is not unitary (probe defect {defect:e})"
            )));
        }
        Ok(u)
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryMatrix {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `‖U†U − I‖_F`. Cubic in the dimension.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        (self.matrix.adjoint() * &self.matrix - DMatrix::<Complex64>::identity(n, n)).norm()
    }

    /// Largest `‖U†Uv − v‖` over a few fixed pseudo-random unit probes; quadratic in the dimension.
    pub fn probe_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for probe in 0..4u64 {
            let mut state = 0x2545_f491_4f6c_dd1d_u64 ^ probe.wrapping_mul(0x9e37_79b9);
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            };
            let mut v = nalgebra::DVector::from_fn(n, |_, _| Complex64::new(next(), next()));
            let norm = v.norm();
            v /= Complex64::new(norm, 0.0);
            let w = self.matrix.adjoint() * (&self.matrix * &v);
            worst = worst.max((w - v).norm());
        }
        worst
    }
}

/// Result of comparing the combined and split forms of `Ux`.
#[derive(Clone, Copy, Debug)]
pub struct FactorizationCheck {
    /// `min_φ ‖U_combined − e^{iφ}·U_split‖_F`.
    pub max_deviation: f64,
    /// The optimal `e^{iφ}`.
    pub phase: Complex64,
    /// `‖U_combined − U_split‖_F` with no phase freedom.
    pub deviation_without_phase: f64,
}

impl FactorizationCheck {
    pub fn is_exact(&self, tol: f64) -> bool {
        self.deviation_without_phase < tol
    }

    pub fn is_exact_up_to_phase(&self, tol: f64) -> bool {
        self.max_deviation < tol
    }
}

pub fn check_factorization_equivalence(num_sites: usize, boundary: Boundary) -> Result<FactorizationCheck> {
    if num_sites > 10 {
        return Err(Error::Resource(format!(
            "factorization check limited to L ≤ 10, got {num_sites}"
        )));
    }
    let spec = FloquetSpec::new(Model::Ux, num_sites, boundary)?;
    let a = build_dense(&spec.with_factorization(Factorization::Combined))?.into_matrix();
    let b = build_dense(&spec.with_factorization(Factorization::Split))?.into_matrix();
    // min_φ ‖A − e^{iφ}B‖² is attained at e^{iφ} = tr(B†A)/|tr(B†A)|.
    let overlap: Complex64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok(FactorizationCheck {
        max_deviation: (&a - &b * phase).norm(),
        phase,
        deviation_without_phase: (&a - &b).norm(),
    })
}
