//! Ground-state preparation by imaginary-time evolution on dense state vectors.
//!
//! The crate provides exact imaginary-time evolution, the QITE
//! unitary-reconstruction step, adaptive compressed QITE with line-search and
//! Newton time steps, and a small toolkit for geometry on complex projective
//! space (Fubini–Study distance, geodesics, trajectory distances).
//!
//! ```
//! use acq::hamiltonian::{build_tfim, Boundary};
//! use acq::evolution::ite_evolve;
//! use acq::statespace::{overlap_fidelity, StateVector};
//!
//! let model = build_tfim(3, 0.5, 1.0, Boundary::Open).unwrap();
//! let h = model.hamiltonian();
//! let psi = ite_evolve(&h, &StateVector::all_zero(3).unwrap(), 20.0).unwrap();
//! let spectrum = model.exact_spectrum().unwrap();
//! assert!(overlap_fidelity(&psi, &spectrum.ground_state).unwrap() > 1.0 - 1e-6);
//! ```

pub mod acq;
pub mod error;
pub mod evolution;
pub mod geometry;
pub mod hamiltonian;
pub mod harness;
pub mod qite;
pub mod statespace;

pub use error::{Error, Result};
