//! Dense qubit-chain states and the local operations every other module builds on.

mod density;
pub(crate) mod gates;

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use density::{partial_trace, DensityMatrix};
pub(crate) use density::validate_subset;
pub use gates::{apply_pauli, apply_site_rotation, apply_single_site, rotation_gate, Gate2, HADAMARD};

/// Largest chain the dense representation supports.
pub const MAX_SITES: usize = 14;

/// Tolerance on `|‖ψ‖² − 1|` for externally supplied amplitudes.
pub const NORM_TOLERANCE: f64 = 1e-10;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    X,
    Y,
    Z,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::X, Direction::Y, Direction::Z];

    pub fn index(self) -> usize {
        match self {
            Direction::X => 0,
            Direction::Y => 1,
            Direction::Z => 2,
        }
    }

    /// The Pauli matrix `σ^α` as row-major 2×2.
    pub fn pauli(self) -> Gate2 {
        let i = Complex64::i();
        match self {
            Direction::X => [[ZERO, ONE], [ONE, ZERO]],
            Direction::Y => [[ZERO, -i], [i, ZERO]],
            Direction::Z => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::X => "x",
            Direction::Y => "y",
            Direction::Z => "z",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A Pauli eigen-direction: `σ^α` together with the eigenvalue sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Axis {
    pub direction: Direction,
    pub sign: Sign,
}

impl Axis {
    pub const X_PLUS: Axis = Axis::new(Direction::X, Sign::Plus);
    pub const X_MINUS: Axis = Axis::new(Direction::X, Sign::Minus);
    pub const Y_PLUS: Axis = Axis::new(Direction::Y, Sign::Plus);
    pub const Y_MINUS: Axis = Axis::new(Direction::Y, Sign::Minus);
    pub const Z_PLUS: Axis = Axis::new(Direction::Z, Sign::Plus);
    pub const Z_MINUS: Axis = Axis::new(Direction::Z, Sign::Minus);

    pub const fn new(direction: Direction, sign: Sign) -> Self {
        Axis { direction, sign }
    }

    pub fn flipped(self) -> Axis {
        Axis::new(self.direction, self.sign.flipped())
    }

    /// Single-site eigenvector in the z basis. The y eigenvectors are `(|0⟩ ± i|1⟩)/√2`.
    pub fn eigenvector(self) -> [Complex64; 2] {
        let h = FRAC_1_SQRT_2;
        let s = self.sign.value();
        match self.direction {
            Direction::Z => match self.sign {
                Sign::Plus => [ONE, ZERO],
                Sign::Minus => [ZERO, ONE],
            },
            Direction::X => [Complex64::new(h, 0.0), Complex64::new(s * h, 0.0)],
            Direction::Y => [Complex64::new(h, 0.0), Complex64::new(0.0, s * h)],
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "{}{}", self.direction, sign)
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// Accepts `x`, `x+`, `x-` (any case); a bare direction means the `+1` eigenstate.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let (dir, sign) = match t.as_bytes() {
            [d] => (*d, Sign::Plus),
            [d, b'+'] => (*d, Sign::Plus),
            [d, b'-'] => (*d, Sign::Minus),
            _ => return Err(Error::Argument(format!("unrecognised axis `{s}`"))),
        };
        let direction = match dir {
            b'x' => Direction::X,
            b'y' => Direction::Y,
            b'z' => Direction::Z,
            _ => return Err(Error::Argument(format!("unrecognised axis `{s}`"))),
        };
        Ok(Axis::new(direction, sign))
    }
}

/// A normalized pure state of an `L`-site qubit chain in the z basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_sites: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps externally supplied amplitudes, checking length and normalization.
    pub fn from_amplitudes(num_sites: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_sites(num_sites, 1)?;
        if amplitudes.len() != 1 << num_sites {
            return Err(Error::Argument(format!(
                "{} amplitudes supplied for {num_sites} sites (expected {})",
                amplitudes.len(),
                1usize << num_sites
            )));
        }
        let norm = norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Validation(format!("state norm² is {norm}, expected 1")));
        }
        Ok(StateVector {
            num_sites,
            amplitudes,
        })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(num_sites: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = norm_sqr(&amplitudes).sqrt();
        if !norm.is_normal() {
            return Err(Error::Validation("cannot normalize a zero state".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(num_sites, amplitudes)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_sites: usize, index: usize) -> Result<Self> {
        check_sites(num_sites, 1)?;
        let dim = 1usize << num_sites;
        if index >= dim {
            return Err(Error::Argument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(StateVector {
            num_sites,
            amplitudes,
        })
    }

    /// Tensor product of single-site vectors, site 1 first.
    pub fn product(factors: &[[Complex64; 2]]) -> Result<Self> {
        check_sites(factors.len(), 1)?;
        let mut amplitudes = vec![ONE];
        for f in factors {
            let n = (f[0].norm_sqr() + f[1].norm_sqr()).sqrt();
            if !n.is_normal() {
                return Err(Error::Validation("zero single-site factor".into()));
            }
            amplitudes = amplitudes
                .iter()
                .flat_map(|a| [a * f[0] / n, a * f[1] / n])
                .collect();
        }
        Ok(StateVector {
            num_sites: factors.len(),
            amplitudes,
        })
    }

    pub(crate) fn from_raw(num_sites: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << num_sites);
        StateVector {
            num_sites,
            amplitudes,
        }
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.num_sites != other.num_sites {
            return Err(Error::Argument(format!(
                "state sizes differ: {} vs {} sites",
                self.num_sites, other.num_sites
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product `self ⊗ other`, with `self` on the leading sites.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let num_sites = self.num_sites + other.num_sites;
        check_sites(num_sites, 1)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(StateVector::from_raw(num_sites, amplitudes))
    }

    /// Largest `|amplitude|` and its basis index.
    pub fn max_amplitude(&self) -> (usize, f64) {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| (i, a.norm()))
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc })
    }

    /// Applies a 2×2 gate to each site in turn.
    pub fn map_sites(&self, gate: &Gate2) -> StateVector {
        let mut amps = self.amplitudes.clone();
        for site in 1..=self.num_sites {
            apply_single_site(&mut amps, self.num_sites, site, gate);
        }
        StateVector::from_raw(self.num_sites, amps)
    }
}

pub(crate) fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

pub(crate) fn check_sites(num_sites: usize, min: usize) -> Result<()> {
    if num_sites < min || num_sites > MAX_SITES {
        return Err(Error::Size(format!(
            "chain length {num_sites} outside supported range [{min}, {MAX_SITES}]"
        )));
    }
    Ok(())
}

/// Every site in the `axis` eigenstate.
pub fn make_polarized_state(num_sites: usize, axis: Axis) -> Result<StateVector> {
    check_sites(num_sites, 1)?;
    StateVector::product(&vec![axis.eigenvector(); num_sites])
}

/// `(|α+…α+⟩ + |α−…α−⟩)/√2` expressed in the z basis.
pub fn make_ghz(num_sites: usize, direction: Direction) -> Result<StateVector> {
    check_sites(num_sites, 2)?;
    let plus = make_polarized_state(num_sites, Axis::new(direction, Sign::Plus))?;
    let minus = make_polarized_state(num_sites, Axis::new(direction, Sign::Minus))?;
    let amps = plus
        .amplitudes
        .iter()
        .zip(&minus.amplitudes)
        .map(|(a, b)| (a + b) * FRAC_1_SQRT_2)
        .collect();
    Ok(StateVector::from_raw(num_sites, amps))
}

/// Product of two z-basis GHZ states on the left and right halves of the chain.
pub fn make_psi_o(num_sites: usize) -> Result<StateVector> {
    if !num_sites.is_multiple_of(2) || num_sites < 4 {
        return Err(Error::Size(format!(
            "two-GHZ product needs an even chain of at least 4 sites, got {num_sites}"
        )));
    }
    check_sites(num_sites, 4)?;
    let half = make_ghz(num_sites / 2, Direction::Z)?;
    half.tensor(&half)
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}

/// Fidelity with the closest GHZ-type state `(|α+…⟩ + e^{iφ}|α−…⟩)/√2`, maximized over `φ`.
pub fn ghz_class_fidelity(state: &StateVector, direction: Direction) -> Result<f64> {
    let l = state.num_sites();
    let plus = make_polarized_state(l, Axis::new(direction, Sign::Plus))?;
    let minus = make_polarized_state(l, Axis::new(direction, Sign::Minus))?;
    let a = plus.inner(state)?.norm();
    let b = minus.inner(state)?.norm();
    Ok(((a + b) * (a + b) / 2.0).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_amps(state: &StateVector, expected: &[Complex64]) {
        assert_eq!(state.dim(), expected.len());
        for (a, e) in state.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() < 1e-12, "{a} != {e}");
        }
    }

    #[test]
    fn polarized_examples() {
        assert_amps(&make_polarized_state(1, Axis::Z_PLUS).unwrap(), &[ONE, ZERO]);
        assert_amps(
            &make_polarized_state(2, Axis::X_PLUS).unwrap(),
            &[c(0.5, 0.0); 4],
        );
        let h = FRAC_1_SQRT_2;
        assert_amps(
            &make_polarized_state(1, Axis::Y_PLUS).unwrap(),
            &[c(h, 0.0), c(0.0, h)],
        );
    }

    #[test]
    fn polarized_size_errors() {
        assert!(matches!(make_polarized_state(0, Axis::Z_PLUS), Err(Error::Size(_))));
        assert!(matches!(make_polarized_state(15, Axis::Z_PLUS), Err(Error::Size(_))));
        assert!(make_polarized_state(14, Axis::Z_PLUS).is_ok());
    }

    #[test]
    fn ghz_examples() {
        let h = FRAC_1_SQRT_2;
        assert_amps(
            &make_ghz(2, Direction::Z).unwrap(),
            &[c(h, 0.0), ZERO, ZERO, c(h, 0.0)],
        );
        let g3 = make_ghz(3, Direction::Z).unwrap();
        for (i, a) in g3.amplitudes().iter().enumerate() {
            let e = if i == 0 || i == 7 { h } else { 0.0 };
            assert_abs_diff_eq!(a.re, e, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-12);
        }
        assert!(matches!(make_ghz(1, Direction::X), Err(Error::Size(_))));
    }

    #[test]
    fn x_ghz_is_sitewise_hadamard_of_z_ghz() {
        for l in 2..=5 {
            let rotated = make_ghz(l, Direction::Z).unwrap().map_sites(&HADAMARD);
            let direct = make_ghz(l, Direction::X).unwrap();
            assert_amps(&direct, rotated.amplitudes());
        }
        // L = 2: (|++⟩ + |−−⟩)/√2 coincides with (|00⟩ + |11⟩)/√2.
        let h = FRAC_1_SQRT_2;
        assert_amps(
            &make_ghz(2, Direction::X).unwrap(),
            &[c(h, 0.0), ZERO, ZERO, c(h, 0.0)],
        );
    }

    #[test]
    fn psi_o_support() {
        let s = make_psi_o(4).unwrap();
        for (i, a) in s.amplitudes().iter().enumerate() {
            let e = if [0b0000, 0b0011, 0b1100, 0b1111].contains(&i) { 0.5 } else { 0.0 };
            assert_abs_diff_eq!(a.re, e, epsilon = 1e-12);
        }
        let s6 = make_psi_o(6).unwrap();
        let support: Vec<usize> = s6
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 1e-12)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(support, vec![0b000000, 0b000111, 0b111000, 0b111111]);
        assert!(matches!(make_psi_o(5), Err(Error::Size(_))));
        assert!(matches!(make_psi_o(2), Err(Error::Size(_))));
    }

    #[test]
    fn fidelity_examples() {
        let zero = StateVector::basis(1, 0).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        let plus = make_polarized_state(1, Axis::X_PLUS).unwrap();
        assert_abs_diff_eq!(fidelity(&zero, &one).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fidelity(&zero, &plus).unwrap(), 0.5, epsilon = 1e-15);

        let psi = make_polarized_state(3, Axis::Y_MINUS).unwrap();
        let phase = Complex64::from_polar(1.0, 0.73);
        let rotated = StateVector::from_raw(3, psi.amplitudes().iter().map(|a| a * phase).collect());
        assert_abs_diff_eq!(fidelity(&psi, &rotated).unwrap(), 1.0, epsilon = 1e-12);

        assert!(matches!(fidelity(&zero, &psi), Err(Error::Argument(_))));
    }

    #[test]
    fn ghz_class_fidelity_ignores_relative_phase() {
        let l = 4;
        let p = make_polarized_state(l, Axis::Y_PLUS).unwrap();
        let m = make_polarized_state(l, Axis::Y_MINUS).unwrap();
        let phase = Complex64::from_polar(1.0, -1.1);
        let amps = p
            .amplitudes()
            .iter()
            .zip(m.amplitudes())
            .map(|(a, b)| a + phase * b)
            .collect();
        let s = StateVector::normalized(l, amps).unwrap();
        assert_abs_diff_eq!(ghz_class_fidelity(&s, Direction::Y).unwrap(), 1.0, epsilon = 1e-12);
        assert!(fidelity(&s, &make_ghz(l, Direction::Y).unwrap()).unwrap() < 0.99);
    }

    #[test]
    fn axis_parsing() {
        assert_eq!("x".parse::<Axis>().unwrap(), Axis::X_PLUS);
        assert_eq!("Z-".parse::<Axis>().unwrap(), Axis::Z_MINUS);
        assert_eq!("y+".parse::<Axis>().unwrap(), Axis::Y_PLUS);
        assert!("w".parse::<Axis>().is_err());
        assert_eq!(Axis::Y_MINUS.to_string(), "y-");
    }

    #[test]
    fn from_amplitudes_rejects_bad_input() {
        assert!(StateVector::from_amplitudes(2, vec![ONE; 3]).is_err());
        assert!(matches!(
            StateVector::from_amplitudes(1, vec![ONE, ONE]),
            Err(Error::Validation(_))
        ));
    }
}
