use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{Error, Result};

/// Vectors with norm below this are rejected by [`normalize`].
pub const ZERO_NORM: f64 = 1e-14;

/// Complex amplitude vector over an `n`-qubit register.
///
/// Qubit 0 is the most significant bit of the amplitude index, so `|q0 q1 ... >`
/// lives at index `q0·2^(n-1) + q1·2^(n-2) + ...`.
///
/// Most constructors produce unit vectors. [`StateVector::from_amplitudes`]
/// keeps the amplitudes as given; call [`normalize`] to project onto the unit
/// sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Wraps raw amplitudes. The length must be a power of two (at least 2).
    pub fn from_amplitudes(amplitudes: DVector<C64>) -> Result<Self> {
        let n_qubits = qubits_for_dim(amplitudes.len())?;
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn from_vec(amplitudes: Vec<C64>) -> Result<Self> {
        Self::from_amplitudes(DVector::from_vec(amplitudes))
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = DVector::zeros(dim);
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// `|00...0>`.
    pub fn all_zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// `|++...+>`, the uniform superposition.
    pub fn all_plus(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        let amp = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self { n_qubits, amplitudes: DVector::from_element(dim, amp) })
    }

    /// Haar-random state drawn from `rng`.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        let amplitudes =
            DVector::from_fn(dim, |_, _| C64::new(standard_normal(rng), standard_normal(rng)));
        normalize(&Self { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Same register, new amplitudes. Used internally where the length is
    /// known to match.
    pub(crate) fn with_amplitudes(&self, amplitudes: DVector<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), self.dim());
        Self { n_qubits: self.n_qubits, amplitudes }
    }
}

/// Rescales `state` to unit norm.
pub fn normalize(state: &StateVector) -> Result<StateVector> {
    let norm = state.norm();
    if norm.is_nan() || norm < ZERO_NORM {
        return Err(Error::ZeroNorm(norm));
    }
    Ok(state.with_amplitudes(state.amplitudes.unscale(norm)))
}

/// `|<a|b>|`, invariant under the global phase of either argument.
pub fn overlap_fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm().min(1.0))
}

pub(crate) fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "register size must be in 1..={MAX_QUBITS}, got {n_qubits}"
        )));
    }
    Ok(())
}

/// Hard ceiling on register size for the dense representation.
pub const MAX_QUBITS: usize = 24;

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "amplitude vector length {dim} is not a power of two >= 2"
        )));
    }
    let n = dim.trailing_zeros() as usize;
    check_register(n)?;
    Ok(n)
}

/// Box–Muller standard normal sample.
pub(crate) fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
