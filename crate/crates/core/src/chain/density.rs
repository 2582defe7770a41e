use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{StateVector, ZERO};
use crate::error::{Error, Result};

/// Reduced state of a chain segment; row/column index bits follow the kept-site order.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_sites: usize,
    elements: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Wraps a matrix after checking it is Hermitian with unit trace.
    pub fn new(num_sites: usize, elements: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1usize << num_sites;
        if elements.nrows() != dim || elements.ncols() != dim {
            return Err(Error::Argument(format!(
                "density matrix is {}x{}, expected {dim}x{dim}",
                elements.nrows(),
                elements.ncols()
            )));
        }
        let herm = (&elements - elements.adjoint()).norm();
        if herm > 1e-10 {
            return Err(Error::Validation(format!("density matrix not Hermitian ({herm:e})")));
        }
        let tr = elements.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::Validation(format!("density matrix trace is {tr}")));
        }
        Ok(DensityMatrix {
            num_sites,
            elements,
        })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn elements(&self) -> &DMatrix<Complex64> {
        &self.elements
    }

    /// Real eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.elements.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(state: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        DensityMatrix {
            num_sites: state.num_sites(),
            elements: &v * v.adjoint(),
        }
    }
}

pub(crate) fn validate_subset(num_sites: usize, kept: &[usize]) -> Result<()> {
    if kept.is_empty() {
        return Err(Error::Argument("kept-site subset is empty".into()));
    }
    if kept.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument(format!(
            "kept sites {kept:?} must be strictly increasing"
        )));
    }
    if kept[0] == 0 || *kept.last().unwrap() > num_sites {
        return Err(Error::Argument(format!(
            "kept sites {kept:?} outside 1..={num_sites}"
        )));
    }
    Ok(())
}

/// Reshapes `ψ` into a `2^|kept| × 2^(L−|kept|)` matrix: row bits are the kept sites in order,
/// column bits the remaining sites in chain order.
pub(crate) fn bipartition_matrix(state: &StateVector, kept: &[usize]) -> DMatrix<Complex64> {
    let l = state.num_sites();
    let k = kept.len();
    let mut is_kept = vec![false; l + 1];
    for &s in kept {
        is_kept[s] = true;
    }
    let rest: Vec<usize> = (1..=l).filter(|s| !is_kept[*s]).collect();
    let bit = |idx: usize, site: usize| (idx >> (l - site)) & 1;
    let mut m = DMatrix::from_element(1 << k, 1 << (l - k), ZERO);
    for (idx, a) in state.amplitudes().iter().enumerate() {
        let row = kept.iter().fold(0, |acc, &s| (acc << 1) | bit(idx, s));
        let col = rest.iter().fold(0, |acc, &s| (acc << 1) | bit(idx, s));
        m[(row, col)] = *a;
    }
    m
}

/// Reduced density matrix on `kept_sites` (1-based, strictly increasing).
pub fn partial_trace(state: &StateVector, kept_sites: &[usize]) -> Result<DensityMatrix> {
    validate_subset(state.num_sites(), kept_sites)?;
    let m = bipartition_matrix(state, kept_sites);
    let rho = &m * m.adjoint();
    Ok(DensityMatrix {
        num_sites: kept_sites.len(),
        elements: rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{make_ghz, make_polarized_state, Axis, Direction};

    fn close(a: &DMatrix<Complex64>, diag: &[f64]) -> bool {
        let mut e = DMatrix::from_element(diag.len(), diag.len(), ZERO);
        for (i, d) in diag.iter().enumerate() {
            e[(i, i)] = Complex64::new(*d, 0.0);
        }
        (a - e).norm() < 1e-12
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let bell = make_ghz(2, Direction::Z).unwrap();
        let rho = partial_trace(&bell, &[1]).unwrap();
        assert!(close(rho.elements(), &[0.5, 0.5]));
    }

    #[test]
    fn product_marginal_is_pure() {
        let s = make_polarized_state(3, Axis::Z_PLUS).unwrap();
        let rho = partial_trace(&s, &[2]).unwrap();
        assert!(close(rho.elements(), &[1.0, 0.0]));
    }

    #[test]
    fn ghz_two_site_marginal() {
        let g = make_ghz(4, Direction::Z).unwrap();
        let rho = partial_trace(&g, &[1, 2]).unwrap();
        assert!(close(rho.elements(), &[0.5, 0.0, 0.0, 0.5]));
    }

    #[test]
    fn full_trace_reproduces_projector() {
        let s = make_polarized_state(3, Axis::Y_MINUS).unwrap();
        let rho = partial_trace(&s, &[1, 2, 3]).unwrap();
        assert!((rho.elements() - DensityMatrix::pure(&s).elements()).norm() < 1e-12);
    }

    #[test]
    fn subset_errors() {
        let s = make_polarized_state(3, Axis::Z_PLUS).unwrap();
        for bad in [&[][..], &[2, 2], &[3, 1], &[0], &[4]] {
            assert!(matches!(partial_trace(&s, bad), Err(Error::Argument(_))), "{bad:?}");
        }
    }

    #[test]
    fn density_matrix_validation() {
        let m = DMatrix::from_element(2, 2, Complex64::new(0.5, 0.0));
        assert!(DensityMatrix::new(1, m).is_ok());
        let m = DMatrix::from_element(2, 2, Complex64::new(1.0, 0.0));
        assert!(matches!(DensityMatrix::new(1, m), Err(Error::Validation(_))));
    }
}
