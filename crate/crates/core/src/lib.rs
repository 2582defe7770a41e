//! Stroboscopic dynamics of kicked Ising chains and the entanglement they generate.
//!
//! The crate is organised bottom-up:
//!
//! * [`chain`] — dense state vectors over the `2^L` computational basis, local gates,
//!   reduced density matrices and fidelities;
//! * [`floquet`] — the one-period maps of the integrable transverse-kick chain (`U0`)
//!   and the non-integrable chain with a longitudinal field (`Ux`);
//! * [`spectral`] — quasi-energies, degeneracies, spacing and period detection;
//! * [`entanglement`] — von Neumann entropies, partition-averaged entropy and the
//!   geometric measure;
//! * [`qfi`] — quantum Fisher information of local linear observables and
//!   entanglement-depth certification;
//! * [`runner`] — experiment configuration, per-period measurement and CSV export.
//!
//! Basis convention: site 1 is the most significant bit of a basis index and bit value
//! `b` at a site is the `σ^z` eigenvalue `(-1)^b`.

pub mod chain;
pub mod entanglement;
pub mod error;
pub mod floquet;
pub mod qfi;
pub mod runner;
pub mod spectral;

pub(crate) mod seed;

pub use chain::{Axis, DensityMatrix, Direction, Sign, StateVector};
pub use error::{Error, Result};
pub use floquet::{Boundary, Factorization, Floquet, FloquetSpec, Model, UnitaryMatrix};
pub use num_complex::Complex64;
