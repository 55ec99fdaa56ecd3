//! Dense complex linear algebra over n-qubit registers.
//!
//! Qubit 0 is the most significant bit of every amplitude and matrix index.

mod operator;
mod pauli;
pub(crate) mod state;

pub use operator::{
    embed_operator, expectation, herm_exp, DenseOperator, HermitianSpectrum, LocalOperator,
    EXPECTATION_IMAG_TOL, HERMITIAN_TOL,
};
pub use pauli::{Pauli, PauliString};
pub use state::{normalize, overlap_fidelity, StateVector, MAX_QUBITS, ZERO_NORM};

#[cfg(test)]
pub(crate) use operator::max_abs;
