//! Spin-chain Hamiltonians, their T-local decompositions and exact spectra.
//!
//! The transverse-field Ising chain is
//!
//! ```text
//! H = J Σ_j Z_j Z_{j+1} + h Σ_j X_j
//! ```
//!
//! with open boundaries by default. A periodic chain adds the wrap-around bond
//! `(n-1, 0)` and needs at least three sites.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statespace::{
    embed_operator, DenseOperator, HermitianSpectrum, LocalOperator, PauliString, StateVector,
};

/// Largest register [`exact_spectrum`] will diagonalize.
pub const SPECTRUM_BUDGET: usize = 14;

/// Eigenvalues closer than this (relative) to `E_0` count as ground states.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "open" => Ok(Boundary::Open),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(Error::Config(format!("unknown boundary {other:?} (expected open|periodic)"))),
        }
    }
}

/// One Hamiltonian piece acting on a few neighbouring qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalTerm {
    /// Neighbouring qubits, left to right along the chain. The periodic wrap
    /// bond is `[n-1, 0]`.
    pub support: Vec<usize>,
    /// Hermitian block on `support.len()` qubits.
    pub block: DenseOperator,
}

impl LocalTerm {
    pub fn new(support: Vec<usize>, block: DenseOperator) -> Result<Self> {
        if !block.is_hermitian() {
            return Err(Error::InvalidArgument("local term block must be Hermitian".into()));
        }
        if block.n_qubits() != support.len() {
            return Err(Error::DimensionMismatch { expected: support.len(), found: block.n_qubits() });
        }
        LocalOperator::new(block.matrix().clone(), support.clone())?;
        Ok(Self { support, block })
    }

    pub fn local_operator(&self) -> LocalOperator {
        LocalOperator::new(self.block.matrix().clone(), self.support.clone())
            .expect("validated at construction")
    }

    pub fn embed(&self, n_total: usize) -> Result<DenseOperator> {
        embed_operator(&self.block, &self.support, n_total)
    }
}

/// Transverse-field Ising chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinChainModel {
    pub n_qubits: usize,
    /// ZZ coupling `J`.
    pub coupling: f64,
    /// Transverse field `h`.
    pub field: f64,
    #[serde(default)]
    pub boundary: Boundary,
}

/// Builds the TFIM on `n` sites.
pub fn build_tfim(n: usize, coupling: f64, field: f64, boundary: Boundary) -> Result<SpinChainModel> {
    if n == 0 {
        return Err(Error::InvalidArgument("a spin chain needs at least one site".into()));
    }
    if n > crate::statespace::MAX_QUBITS {
        return Err(Error::OverBudget { n_qubits: n, budget: crate::statespace::MAX_QUBITS });
    }
    if boundary == Boundary::Periodic && n < 3 {
        return Err(Error::InvalidArgument(format!(
            "periodic boundary needs at least 3 sites, got {n}"
        )));
    }
    if !coupling.is_finite() || !field.is_finite() {
        return Err(Error::InvalidArgument("couplings must be finite".into()));
    }
    Ok(SpinChainModel { n_qubits: n, coupling, field, boundary })
}

impl SpinChainModel {
    /// Nearest-neighbour bonds in sweep order; the wrap bond comes last.
    pub fn bonds(&self) -> Vec<[usize; 2]> {
        let n = self.n_qubits;
        let mut bonds: Vec<[usize; 2]> = (0..n.saturating_sub(1)).map(|j| [j, j + 1]).collect();
        if self.boundary == Boundary::Periodic {
            bonds.push([n - 1, 0]);
        }
        bonds
    }

    /// `(coefficient, Pauli string)` expansion of `H`.
    pub fn pauli_terms(&self) -> Vec<(f64, PauliString)> {
        let n = self.n_qubits;
        let mut terms = Vec::new();
        for [a, b] in self.bonds() {
            let p = PauliString::on_support(n, &[a, b], &[crate::statespace::Pauli::Z; 2]).unwrap();
            terms.push((self.coupling, p));
        }
        for q in 0..n {
            let p = PauliString::on_support(n, &[q], &[crate::statespace::Pauli::X]).unwrap();
            terms.push((self.field, p));
        }
        terms
    }

    /// Dense `H` on the full register.
    pub fn hamiltonian(&self) -> DenseOperator {
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for (c, p) in self.pauli_terms() {
            m += p.to_matrix() * C64::new(c, 0.0);
        }
        DenseOperator::hermitian(m).expect("Pauli sums with real coefficients are Hermitian")
    }

    pub fn decompose_local(&self, locality: usize) -> Result<Vec<LocalTerm>> {
        decompose_local(self, locality)
    }

    pub fn exact_spectrum(&self) -> Result<ExactSpectrum> {
        exact_spectrum(self)
    }
}

/// Splits `H` into terms acting on at most `locality` neighbouring qubits.
///
/// Canonical grouping for `locality >= 2` on chains of two or more sites: one
/// term per bond, `J Z_a Z_b + h_a X_a + h_b X_b`, where each site's field is
/// shared equally among the bonds that contain it (`h/2` in the bulk, `h` on
/// the ends of an open chain). A TFIM chain of `n` open sites therefore yields
/// `n - 1` terms, a periodic chain `n` terms, and a single site one `h X` term.
/// With `locality == 1` (only allowed when `J == 0`) every site gets its own
/// `h X` term.
pub fn decompose_local(model: &SpinChainModel, locality: usize) -> Result<Vec<LocalTerm>> {
    let n = model.n_qubits;
    if locality == 0 {
        return Err(Error::LocalityViolation { range: 1, locality });
    }
    let x = crate::statespace::Pauli::X.matrix();
    let field_block = |h: f64| DenseOperator::hermitian(x.clone() * C64::new(h, 0.0)).unwrap();
    if n == 1 {
        return Ok(vec![LocalTerm::new(vec![0], field_block(model.field))?]);
    }
    if locality == 1 {
        if model.coupling != 0.0 {
            return Err(Error::LocalityViolation { range: 2, locality });
        }
        return (0..n).map(|q| LocalTerm::new(vec![q], field_block(model.field))).collect();
    }

    let bonds = model.bonds();
    let mut share = vec![0usize; n];
    for [a, b] in &bonds {
        share[*a] += 1;
        share[*b] += 1;
    }
    let zz = PauliString::parse("ZZ").unwrap().to_matrix();
    let xi = PauliString::parse("XI").unwrap().to_matrix();
    let ix = PauliString::parse("IX").unwrap().to_matrix();
    bonds
        .iter()
        .map(|&[a, b]| {
            let ha = model.field / share[a] as f64;
            let hb = model.field / share[b] as f64;
            let m = &zz * C64::new(model.coupling, 0.0) + &xi * C64::new(ha, 0.0) + &ix * C64::new(hb, 0.0);
            LocalTerm::new(vec![a, b], DenseOperator::hermitian(m)?)
        })
        .collect()
}

/// Sum of embedded local terms.
pub fn reassemble(terms: &[LocalTerm], n_total: usize) -> Result<DenseOperator> {
    terms.iter().try_fold(DenseOperator::zeros(n_total), |acc, t| acc.add(&t.embed(n_total)?))
}

/// Reference spectrum of a model.
#[derive(Clone, Debug)]
pub struct ExactSpectrum {
    /// All eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Unit eigenvector of the smallest eigenvalue.
    pub ground_state: StateVector,
    /// Orthonormal basis of the (possibly degenerate) ground space.
    pub ground_space: Vec<StateVector>,
    /// `E_1 - E_0`, zero for a degenerate ground state.
    pub gap: f64,
}

impl ExactSpectrum {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Ground-state fidelity `sqrt(<ψ|P_0|ψ>)`, with `P_0` the projector on the
    /// ground space. Reduces to `|<E_0|ψ>|` for a non-degenerate ground state.
    pub fn ground_fidelity(&self, state: &StateVector) -> Result<f64> {
        let mut weight = 0.0;
        for g in &self.ground_space {
            weight += g.inner(state)?.norm_sqr();
        }
        Ok(weight.sqrt().min(1.0))
    }

    pub fn spectral_norm(&self) -> f64 {
        let lo = self.eigenvalues[0].abs();
        let hi = self.eigenvalues[self.eigenvalues.len() - 1].abs();
        lo.max(hi)
    }
}

pub fn exact_spectrum(model: &SpinChainModel) -> Result<ExactSpectrum> {
    if model.n_qubits > SPECTRUM_BUDGET {
        return Err(Error::OverBudget { n_qubits: model.n_qubits, budget: SPECTRUM_BUDGET });
    }
    spectrum_of(&model.hamiltonian())
}

/// [`ExactSpectrum`] of an arbitrary Hermitian operator.
pub fn spectrum_of(h: &DenseOperator) -> Result<ExactSpectrum> {
    if h.n_qubits() > SPECTRUM_BUDGET {
        return Err(Error::OverBudget { n_qubits: h.n_qubits(), budget: SPECTRUM_BUDGET });
    }
    let HermitianSpectrum { eigenvalues, eigenvectors } = h.spectrum()?;
    let e0 = eigenvalues[0];
    let tol = DEGENERACY_TOL * e0.abs().max(1.0);
    let column = |k: usize| StateVector::from_amplitudes(eigenvectors.column(k).into_owned());
    let ground_space = (0..eigenvalues.len())
        .take_while(|&k| eigenvalues[k] - e0 <= tol)
        .map(column)
        .collect::<Result<Vec<_>>>()?;
    let gap = match eigenvalues.get(1) {
        Some(&e1) if e1 - e0 > tol => e1 - e0,
        _ => 0.0,
    };
    Ok(ExactSpectrum { ground_state: ground_space[0].clone(), ground_space, eigenvalues, gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statespace::expectation;
    use approx::assert_abs_diff_eq;

    fn residual(h: &DenseOperator, e: f64, v: &StateVector) -> f64 {
        (h.matrix() * v.amplitudes() - v.amplitudes() * C64::new(e, 0.0)).norm()
    }

    #[test]
    fn single_spin_field() {
        let m = build_tfim(1, 3.0, 1.0, Boundary::Open).unwrap();
        let s = m.exact_spectrum().unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.eigenvalues[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.gap, 2.0, epsilon = 1e-12);
        let minus = StateVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]).unwrap();
        let minus = crate::statespace::normalize(&minus).unwrap();
        assert_abs_diff_eq!(s.ground_fidelity(&minus).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn two_spin_matches_explicit_terms() {
        let m = build_tfim(2, 0.5, 1.0, Boundary::Open).unwrap();
        let explicit = PauliString::parse("ZZ").unwrap().to_matrix() * C64::new(0.5, 0.0)
            + PauliString::parse("XI").unwrap().to_matrix()
            + PauliString::parse("IX").unwrap().to_matrix();
        assert!(m.hamiltonian().max_abs_diff(&DenseOperator::hermitian(explicit).unwrap()) < 1e-15);
        let s = m.exact_spectrum().unwrap();
        assert_eq!(s.eigenvalues.len(), 4);
        assert!(residual(&m.hamiltonian(), s.eigenvalues[0], &s.ground_state) < 1e-10);
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn decoupled_spins() {
        let m = build_tfim(2, 0.0, 1.0, Boundary::Open).unwrap();
        let s = m.exact_spectrum().unwrap();
        assert_abs_diff_eq!(s.ground_energy(), -2.0, epsilon = 1e-12);
        let amp = C64::new(0.5, 0.0);
        let minus_minus = StateVector::from_vec(vec![amp, -amp, -amp, amp]).unwrap();
        assert_abs_diff_eq!(s.ground_fidelity(&minus_minus).unwrap(), 1.0, epsilon = 1e-12);
        for n in 1..=6 {
            let m = build_tfim(n, 0.0, 0.8, Boundary::Open).unwrap();
            assert_abs_diff_eq!(m.exact_spectrum().unwrap().ground_energy(), -0.8 * n as f64, epsilon = 1e-10);
        }
    }

    #[test]
    fn degenerate_ising_ground_space() {
        let m = build_tfim(2, 1.0, 0.0, Boundary::Open).unwrap();
        let s = m.exact_spectrum().unwrap();
        assert_eq!(s.ground_space.len(), 2);
        assert_eq!(s.gap, 0.0);
        assert_abs_diff_eq!(s.ground_energy(), -1.0, epsilon = 1e-12);
        // |01> lies in the ground space even if the returned vector is a mixture.
        let s01 = StateVector::basis(2, 1).unwrap();
        assert_abs_diff_eq!(s.ground_fidelity(&s01).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn term_counts() {
        let m = build_tfim(3, 0.5, 1.0, Boundary::Open).unwrap();
        assert_eq!(m.decompose_local(2).unwrap().len(), 2);
        assert_eq!(m.pauli_terms().len(), 5);
        let p = build_tfim(4, 0.5, 1.0, Boundary::Periodic).unwrap();
        let terms = p.decompose_local(2).unwrap();
        assert_eq!(terms.len(), 4);
        assert_eq!(terms[3].support, vec![3, 0]);
    }

    #[test]
    fn locality_violation() {
        let m = build_tfim(3, 0.5, 1.0, Boundary::Open).unwrap();
        assert!(matches!(m.decompose_local(1), Err(Error::LocalityViolation { .. })));
        let free = build_tfim(3, 0.0, 1.0, Boundary::Open).unwrap();
        assert_eq!(free.decompose_local(1).unwrap().len(), 3);
    }

    #[test]
    fn reassembly_is_exact() {
        for n in 1..=8 {
            for boundary in [Boundary::Open, Boundary::Periodic] {
                let Ok(m) = build_tfim(n, 0.5, 1.0, boundary) else { continue };
                for t in [2, 3, 4] {
                    let terms = m.decompose_local(t).unwrap();
                    assert!(terms.iter().all(|term| term.support.len() <= t));
                    let diff = reassemble(&terms, n).unwrap().max_abs_diff(&m.hamiltonian());
                    assert!(diff < 1e-12, "n={n} t={t} {boundary:?}: {diff}");
                }
            }
        }
    }

    #[test]
    fn invalid_models() {
        assert!(build_tfim(0, 1.0, 1.0, Boundary::Open).is_err());
        assert!(build_tfim(2, 1.0, 1.0, Boundary::Periodic).is_err());
        let big = build_tfim(15, 1.0, 1.0, Boundary::Open).unwrap();
        assert!(matches!(big.exact_spectrum(), Err(Error::OverBudget { .. })));
    }

    #[test]
    fn ground_energy_expectation() {
        let m = build_tfim(3, 0.5, 1.0, Boundary::Open).unwrap();
        let s = m.exact_spectrum().unwrap();
        assert_abs_diff_eq!(
            expectation(&s.ground_state, &m.hamiltonian()).unwrap(),
            s.ground_energy(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn model_round_trips_through_json() {
        let m = build_tfim(5, 0.5, 1.0, Boundary::Periodic).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"periodic\""));
        assert_eq!(serde_json::from_str::<SpinChainModel>(&text).unwrap(), m);
    }
}
