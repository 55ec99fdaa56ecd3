//! QITE: reconstruct a unitary generator for each imaginary-time step of a
//! local Hamiltonian term.
//!
//! For a term `h_k` and the current state `ψ`, the target is the normalized
//! finite-difference step
//!
//! ```text
//! Δ0 = (c^{-1/2} exp(-Δτ h_k) ψ - ψ) / Δτ,    c = <ψ|exp(-2Δτ h_k)|ψ>
//! ```
//!
//! and the generator `A = Σ_I a_I σ_I` (Pauli strings on a window of `D`
//! qubits, identity excluded, real `a`) minimizes `‖Δ0 + i A ψ‖²`. Its normal
//! equations are
//!
//! ```text
//! (S + ε) a = b,   S_IJ = Re<ψ|σ_I σ_J|ψ>,   b_I = Im<Δ0|σ_I ψ>
//! ```
//!
//! with Tikhonov shift `ε = 1e-8 · tr(S) / 4^D`. All expectation values are
//! exact statevector contractions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hamiltonian::{Boundary, LocalTerm, SpinChainModel};
use crate::statespace::{expectation, herm_exp, DenseOperator, LocalOperator, PauliString, StateVector};

/// Largest generator window; the normal equations have `4^D - 1` unknowns.
pub const MAX_DOMAIN: usize = 6;

/// Relative Tikhonov shift applied to the normal equations.
pub const TIKHONOV: f64 = 1e-8;

/// Hermitian generator `A = Σ_I a_I σ_I` on a window of qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QiteGenerator {
    pub n_qubits: usize,
    /// Window qubits; `domain[0]` is the most significant digit of the
    /// coefficient index.
    pub domain: Vec<usize>,
    /// `4^D` coefficients in base-4 order I, X, Y, Z per domain qubit. The
    /// identity coefficient (index 0) is always zero.
    pub coefficients: Vec<f64>,
    /// Achieved least-squares residual `‖Δ0 + i A ψ‖`.
    pub residual: f64,
}

impl QiteGenerator {
    pub fn zero(n_qubits: usize, domain: Vec<usize>) -> Self {
        let k = 1usize << (2 * domain.len());
        Self { n_qubits, domain, coefficients: vec![0.0; k], residual: 0.0 }
    }

    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&a| a == 0.0)
    }

    /// Non-zero terms as full-register Pauli strings.
    pub fn pauli_terms(&self) -> impl Iterator<Item = (f64, PauliString)> + '_ {
        self.coefficients.iter().enumerate().filter(|(_, a)| **a != 0.0).map(|(idx, &a)| {
            let p = PauliString::from_support_index(self.n_qubits, &self.domain, idx)
                .expect("domain validated at construction");
            (a, p)
        })
    }

    /// `2^D × 2^D` matrix of `A` on its window.
    pub fn local_matrix(&self) -> DMatrix<C64> {
        let d = self.domain.len();
        let local: Vec<usize> = (0..d).collect();
        let dim = 1usize << d;
        let mut m = DMatrix::zeros(dim, dim);
        for (idx, &a) in self.coefficients.iter().enumerate() {
            if a != 0.0 {
                m += PauliString::from_support_index(d, &local, idx).unwrap().to_matrix() * C64::new(a, 0.0);
            }
        }
        m
    }

    pub fn local_operator(&self) -> LocalOperator {
        LocalOperator::new(self.local_matrix(), self.domain.clone()).expect("valid window")
    }

    /// `A` on the full register.
    pub fn to_dense(&self) -> Result<DenseOperator> {
        DenseOperator::hermitian(self.local_operator().to_dense(self.n_qubits)?)
    }

    /// `exp(-i t A)` as a window operator.
    pub fn unitary(&self, t: f64) -> Result<LocalOperator> {
        let a = DenseOperator::hermitian(self.local_matrix())?;
        let u = herm_exp(&a, C64::new(0.0, -t))?;
        LocalOperator::new(u.into_matrix(), self.domain.clone())
    }

    /// `exp(-i t A) ψ`.
    pub fn apply(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        if self.is_zero() || t == 0.0 {
            return Ok(psi.clone());
        }
        self.unitary(t)?.apply(psi)
    }
}

/// Window of `size` consecutive chain sites around `support`.
///
/// The window is centred on the support (extra sites split as evenly as
/// possible, the odd one going right) and clipped at the ends of an open
/// chain; a periodic chain wraps around instead. A window at least as large as
/// the chain is the whole register.
pub fn domain_window(support: &[usize], size: usize, n_qubits: usize, boundary: Boundary) -> Result<Vec<usize>> {
    let m = support.len();
    if m == 0 {
        return Err(invalid("empty support"));
    }
    if size < m {
        return Err(Error::LocalityViolation { range: m, locality: size });
    }
    if let Some(&q) = support.iter().find(|&&q| q >= n_qubits) {
        return Err(Error::QubitOutOfRange { index: q, n_qubits });
    }
    if size >= n_qubits {
        return Ok((0..n_qubits).collect());
    }
    let extra_left = (size - m) / 2;
    let window = match boundary {
        Boundary::Open => {
            let lo = *support.iter().min().unwrap();
            let start = lo.saturating_sub(extra_left).min(n_qubits - size);
            (start..start + size).collect()
        }
        Boundary::Periodic => {
            let start = (support[0] + n_qubits - extra_left % n_qubits) % n_qubits;
            (0..size).map(|i| (start + i) % n_qubits).collect::<Vec<_>>()
        }
    };
    Ok(window)
}

/// Normalized imaginary-time difference `Δ0` for one term.
pub fn build_target(term: &LocalTerm, psi: &StateVector, dtau: f64) -> Result<DVector<C64>> {
    if !(dtau.is_finite() && dtau > 0.0) {
        return Err(invalid(format!("time step must be finite and > 0, got {dtau}")));
    }
    // Shifting h_k by its smallest eigenvalue only rescales exp(-Δτ h_k) ψ,
    // which the normalization removes, and keeps the exponential bounded.
    let spectrum = term.block.spectrum()?;
    let shift = spectrum.eigenvalues[0];
    let prop = spectrum.map(|l| C64::new((-dtau * (l - shift)).exp(), 0.0));
    let evolved = LocalOperator::new(prop, term.support.clone())?.apply(psi)?;
    let c = evolved.amplitudes().norm_squared();
    if !(c.is_finite() && c > 0.0) {
        return Err(invalid(format!("normalization factor c = {c:e} is not positive")));
    }
    Ok((evolved.amplitudes() / C64::new(c.sqrt(), 0.0) - psi.amplitudes()) / C64::new(dtau, 0.0))
}

/// Per-letter product `a · b = i^e c` in digit form (I0 X1 Y2 Z3).
fn letter_product(a: usize, b: usize) -> (u32, usize) {
    if a == 0 {
        return (0, b);
    }
    if b == 0 || a == b {
        return (0, if a == b { 0 } else { a });
    }
    // X·Y = iZ, Y·Z = iX, Z·X = iY; reversed order gives -i.
    let c = 6 - a - b;
    let cyclic = matches!((a, b), (1, 2) | (2, 3) | (3, 1));
    (if cyclic { 1 } else { 3 }, c)
}

/// Least-squares generator for `term` on `domain`.
pub fn solve_generator(term: &LocalTerm, psi: &StateVector, dtau: f64, domain: &[usize]) -> Result<QiteGenerator> {
    let n = psi.n_qubits();
    validate_domain(term, domain, n)?;
    let target = build_target(term, psi, dtau)?;
    solve_for_target(&target, psi, domain)
}

fn validate_domain(term: &LocalTerm, domain: &[usize], n: usize) -> Result<()> {
    if domain.len() > MAX_DOMAIN {
        return Err(invalid(format!("domain of {} qubits exceeds the limit {MAX_DOMAIN}", domain.len())));
    }
    for (i, &q) in domain.iter().enumerate() {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, n_qubits: n });
        }
        if domain[..i].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    if let Some(q) = term.support.iter().find(|q| !domain.contains(q)) {
        return Err(invalid(format!("domain {domain:?} does not contain support qubit {q}")));
    }
    Ok(())
}

fn solve_for_target(target: &DVector<C64>, psi: &StateVector, domain: &[usize]) -> Result<QiteGenerator> {
    let n = psi.n_qubits();
    let d = domain.len();
    let k = 1usize << (2 * d);
    let amps = psi.amplitudes();

    let strings: Vec<PauliString> =
        (0..k).map(|idx| PauliString::from_support_index(n, domain, idx)).collect::<Result<_>>()?;
    let ev: Vec<f64> = strings.iter().map(|p| p.expectation_raw(amps).re).collect();
    let b: Vec<f64> = strings[1..].iter().map(|p| target.dotc(&p.apply_raw(amps)).im).collect();

    let m = k - 1;
    let digits = |idx: usize| (0..d).map(move |p| (idx >> (2 * (d - 1 - p))) & 3);
    let mut s = DMatrix::<f64>::zeros(m, m);
    for i in 1..k {
        for j in i..k {
            let mut phase = 0u32;
            let mut prod = 0usize;
            for (da, db) in digits(i).zip(digits(j)) {
                let (e, c) = letter_product(da, db);
                phase += e;
                prod = (prod << 2) | c;
            }
            let v = match phase % 4 {
                0 => ev[prod],
                2 => -ev[prod],
                _ => 0.0,
            };
            s[(i - 1, j - 1)] = v;
            s[(j - 1, i - 1)] = v;
        }
    }
    let eps = TIKHONOV * s.trace() / k as f64;
    for i in 0..m {
        s[(i, i)] += eps;
    }
    let rhs = DVector::from_vec(b);
    let sol = match s.clone().cholesky() {
        Some(ch) => ch.solve(&rhs),
        None => s.lu().solve(&rhs).ok_or(Error::Singular)?,
    };
    if sol.iter().any(|a| !a.is_finite()) {
        return Err(Error::Singular);
    }
    let mut coefficients = vec![0.0; k];
    coefficients[1..].copy_from_slice(sol.as_slice());
    let mut generator = QiteGenerator { n_qubits: n, domain: domain.to_vec(), coefficients, residual: 0.0 };
    let a_psi = generator.local_operator().apply_raw(amps, n);
    generator.residual = (target + a_psi * C64::new(0.0, 1.0)).norm();
    Ok(generator)
}

/// Result of one QITE sweep over all terms.
#[derive(Clone, Debug)]
pub struct QiteStep {
    pub state: StateVector,
    pub generators: Vec<QiteGenerator>,
    pub energy: f64,
}

/// A Hamiltonian split into local terms together with the generator windows.
#[derive(Clone, Debug)]
pub struct QiteProblem {
    n_qubits: usize,
    terms: Vec<LocalTerm>,
    domains: Vec<Vec<usize>>,
    hamiltonian: DenseOperator,
}

impl QiteProblem {
    /// Terms are swept in the given order with windows of `domain_size` sites.
    pub fn new(terms: Vec<LocalTerm>, hamiltonian: DenseOperator, domain_size: usize, boundary: Boundary) -> Result<Self> {
        if !hamiltonian.is_hermitian() {
            return Err(Error::NotHermitian(f64::NAN));
        }
        let n_qubits = hamiltonian.n_qubits();
        let size = domain_size.min(n_qubits);
        if size > MAX_DOMAIN {
            return Err(invalid(format!("domain of {size} qubits exceeds the limit {MAX_DOMAIN}")));
        }
        let domains = terms
            .iter()
            .map(|t| domain_window(&t.support, size, n_qubits, boundary))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n_qubits, terms, domains, hamiltonian })
    }

    /// Canonical two-local split of a spin-chain model.
    pub fn from_model(model: &SpinChainModel, domain_size: usize) -> Result<Self> {
        let locality = if model.n_qubits == 1 { 1 } else { 2 };
        let terms = model.decompose_local(locality)?;
        Self::new(terms, model.hamiltonian(), domain_size, model.boundary)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[LocalTerm] {
        &self.terms
    }

    pub fn domains(&self) -> &[Vec<usize>] {
        &self.domains
    }

    pub fn hamiltonian(&self) -> &DenseOperator {
        &self.hamiltonian
    }

    pub fn energy(&self, psi: &StateVector) -> Result<f64> {
        expectation(psi, &self.hamiltonian)
    }

    /// Generators for every term, all solved against the same state `ψ`.
    pub fn generators(&self, psi: &StateVector, dtau: f64) -> Result<Vec<QiteGenerator>> {
        if psi.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: psi.n_qubits() });
        }
        if dtau < 0.0 || !dtau.is_finite() {
            return Err(invalid(format!("time step must be finite and >= 0, got {dtau}")));
        }
        if dtau == 0.0 {
            return Ok(self.domains.iter().map(|d| QiteGenerator::zero(self.n_qubits, d.clone())).collect());
        }
        self.terms
            .par_iter()
            .zip(self.domains.par_iter())
            .map(|(term, domain)| solve_generator(term, psi, dtau, domain))
            .collect()
    }

    /// One sweep: `ψ -> Π_k exp(-iΔτ A_k) ψ`, factors applied in term order.
    pub fn sweep(&self, psi: &StateVector, dtau: f64) -> Result<QiteStep> {
        let generators = self.generators(psi, dtau)?;
        let state = apply_product(&generators, psi, dtau)?;
        let energy = self.energy(&state)?;
        Ok(QiteStep { state, generators, energy })
    }
}

/// `Π_k exp(-i t A_k) ψ` with `A_0` applied first.
pub fn apply_product(generators: &[QiteGenerator], psi: &StateVector, t: f64) -> Result<StateVector> {
    generators.iter().try_fold(psi.clone(), |state, g| g.apply(&state, t))
}

/// Repeated sweeps from `psi0`, at most `max_steps`. With `stop_on_increase`
/// the run ends at the first sweep that raises the energy, and that sweep is
/// dropped.
pub fn qite_run(
    problem: &QiteProblem,
    psi0: &StateVector,
    dtau: f64,
    max_steps: usize,
    stop_on_increase: bool,
) -> Result<Vec<QiteStep>> {
    let mut steps: Vec<QiteStep> = Vec::new();
    let mut energy = problem.energy(psi0)?;
    let mut psi = psi0.clone();
    for _ in 0..max_steps {
        let step = problem.sweep(&psi, dtau)?;
        if stop_on_increase && step.energy > energy {
            break;
        }
        energy = step.energy;
        psi = step.state.clone();
        steps.push(step);
    }
    Ok(steps)
}

/// One QITE sweep over `terms` with generator windows of `domain_size` sites.
pub fn qite_sweep(
    terms: &[LocalTerm],
    hamiltonian: &DenseOperator,
    psi: &StateVector,
    dtau: f64,
    domain_size: usize,
    boundary: Boundary,
) -> Result<QiteStep> {
    QiteProblem::new(terms.to_vec(), hamiltonian.clone(), domain_size, boundary)?.sweep(psi, dtau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{db_qite_step, double_bracket_generator};
    use crate::hamiltonian::build_tfim;
    use crate::statespace::{overlap_fidelity, Pauli};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single(p: Pauli, scale: f64) -> LocalTerm {
        LocalTerm::new(vec![0], DenseOperator::hermitian(p.matrix() * C64::new(scale, 0.0)).unwrap()).unwrap()
    }

    #[test]
    fn letter_products_match_pauli_algebra() {
        for a in 0..4 {
            for b in 0..4 {
                let pa = PauliString::from_letters(&[Pauli::from_digit(a)]).unwrap();
                let pb = PauliString::from_letters(&[Pauli::from_digit(b)]).unwrap();
                let (phase, pc) = pa.multiply(&pb).unwrap();
                let (e, c) = letter_product(a, b);
                assert_eq!(pc.letter(0), Pauli::from_digit(c));
                let expect = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)];
                assert_eq!(phase, expect[e as usize]);
            }
        }
    }

    #[test]
    fn windows() {
        assert_eq!(domain_window(&[3, 4], 2, 8, Boundary::Open).unwrap(), vec![3, 4]);
        assert_eq!(domain_window(&[3, 4], 4, 8, Boundary::Open).unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(domain_window(&[0, 1], 4, 8, Boundary::Open).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(domain_window(&[6, 7], 4, 8, Boundary::Open).unwrap(), vec![4, 5, 6, 7]);
        assert_eq!(domain_window(&[3, 4], 3, 8, Boundary::Open).unwrap(), vec![3, 4, 5]);
        assert_eq!(domain_window(&[7, 0], 4, 8, Boundary::Periodic).unwrap(), vec![6, 7, 0, 1]);
        assert_eq!(domain_window(&[1, 2], 9, 8, Boundary::Open).unwrap(), (0..8).collect::<Vec<_>>());
        assert!(domain_window(&[1, 2], 1, 8, Boundary::Open).is_err());
    }

    #[test]
    fn target_vanishes_on_eigenstates_and_identity() {
        let z = single(Pauli::Z, 1.0);
        let zero = StateVector::basis(1, 0).unwrap();
        assert!(build_target(&z, &zero, 0.1).unwrap().norm() < 1e-10);
        let id = single(Pauli::I, 1.0);
        let plus = StateVector::all_plus(1).unwrap();
        assert!(build_target(&id, &plus, 0.1).unwrap().norm() < 1e-10);
        assert!(build_target(&z, &plus, 0.0).is_err());
    }

    #[test]
    fn target_first_order_expansion() {
        let z = single(Pauli::Z, 1.0);
        let plus = StateVector::all_plus(1).unwrap();
        // -(Z - <Z>)|+> = -|->
        let oracle = -(Pauli::Z.matrix() * plus.amplitudes());
        let err = |dt: f64| (build_target(&z, &plus, dt).unwrap() - &oracle).norm();
        assert!(err(1e-3) < 2e-3);
        assert!(err(1e-4) < err(1e-3) / 5.0);
    }

    #[test]
    fn single_qubit_generator_follows_double_bracket() {
        let z = single(Pauli::Z, 1.0);
        let plus = StateVector::all_plus(1).unwrap();
        let dt = 1e-3;
        let g = solve_generator(&z, &plus, dt, &[0]).unwrap();
        let out = g.apply(&plus, dt).unwrap();
        let exact = crate::evolution::ite_step(&z.block, &plus, dt).unwrap();
        assert!(1.0 - overlap_fidelity(&out, &exact).unwrap() < 1e-6);

        // A ∝ i[ρ, h]
        let comm = double_bracket_generator(&z.block, &plus).unwrap().into_matrix() * C64::new(0.0, 1.0);
        let a = g.local_matrix();
        let cos = a.iter().zip(comm.iter()).map(|(x, y)| (x.conj() * y).re).sum::<f64>() / (a.norm() * comm.norm());
        assert_abs_diff_eq!(cos, 1.0, epsilon = 1e-3);
        let _ = db_qite_step(&z.block, &plus, dt).unwrap();
    }

    #[test]
    fn eigenstate_gives_zero_generator() {
        let z = single(Pauli::Z, 1.0);
        let zero = StateVector::basis(1, 0).unwrap();
        let g = solve_generator(&z, &zero, 0.1, &[0]).unwrap();
        assert!(g.coefficients.iter().all(|a| a.abs() < 1e-8));
    }

    #[test]
    fn normal_equations_minimize_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let m = build_tfim(3, 0.5, 1.0, Boundary::Open).unwrap();
        let terms = m.decompose_local(2).unwrap();
        let psi = StateVector::random(3, &mut rng).unwrap();
        let dt = 0.05;
        let g = solve_generator(&terms[0], &psi, dt, &[0, 1]).unwrap();
        let target = build_target(&terms[0], &psi, dt).unwrap();
        let objective = |coeffs: &[f64]| {
            let gen = QiteGenerator { coefficients: coeffs.to_vec(), ..g.clone() };
            let a_psi = gen.local_operator().apply(&psi).unwrap();
            (&target + a_psi.amplitudes() * C64::new(0.0, 1.0)).norm_squared()
        };
        let f0 = objective(&g.coefficients);
        assert_abs_diff_eq!(f0.sqrt(), g.residual, epsilon = 1e-12);
        assert!(f0 < objective(&[0.0; 16]));
        // Centered finite-difference gradient vanishes at the solution.
        let h = 1e-5;
        for i in 1..16 {
            let mut up = g.coefficients.clone();
            let mut dn = g.coefficients.clone();
            up[i] += h;
            dn[i] -= h;
            let grad = (objective(&up) - objective(&dn)) / (2.0 * h);
            assert!(grad.abs() < 1e-6, "component {i}: {grad}");
        }
    }

    #[test]
    fn generators_are_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let m = build_tfim(4, 0.5, 1.0, Boundary::Open).unwrap();
        let p = QiteProblem::from_model(&m, 3).unwrap();
        let psi = StateVector::random(4, &mut rng).unwrap();
        for g in p.generators(&psi, 0.1).unwrap() {
            let a = g.local_matrix();
            assert!(crate::statespace::max_abs(&(&a - a.adjoint())) < 1e-10);
            let u = g.unitary(0.1).unwrap();
            let id = DMatrix::<C64>::identity(u.block().nrows(), u.block().nrows());
            assert!(crate::statespace::max_abs(&(u.block().adjoint() * u.block() - id)) < 1e-10);
        }
    }

    #[test]
    fn larger_domain_never_worse() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let m = build_tfim(4, 0.5, 1.0, Boundary::Open).unwrap();
        let terms = m.decompose_local(2).unwrap();
        let psi = StateVector::random(4, &mut rng).unwrap();
        for term in &terms {
            let small = solve_generator(term, &psi, 0.1, &term.support).unwrap();
            let mid = solve_generator(term, &psi, 0.1, &domain_window(&term.support, 3, 4, Boundary::Open).unwrap()).unwrap();
            let full = solve_generator(term, &psi, 0.1, &[0, 1, 2, 3]).unwrap();
            assert!(mid.residual <= small.residual + 1e-7);
            assert!(full.residual <= mid.residual + 1e-7);
        }
    }

    #[test]
    fn domain_must_cover_support() {
        let m = build_tfim(3, 0.5, 1.0, Boundary::Open).unwrap();
        let terms = m.decompose_local(2).unwrap();
        let psi = StateVector::all_zero(3).unwrap();
        assert!(solve_generator(&terms[0], &psi, 0.1, &[1, 2]).is_err());
    }

    #[test]
    fn zero_step_sweep_is_identity() {
        let m = build_tfim(3, 0.5, 1.0, Boundary::Open).unwrap();
        let p = QiteProblem::from_model(&m, 2).unwrap();
        let psi = StateVector::all_zero(3).unwrap();
        let step = p.sweep(&psi, 0.0).unwrap();
        assert_eq!(step.state, psi);
        assert!(step.generators.iter().all(QiteGenerator::is_zero));
    }

    #[test]
    fn untruncated_sweeps_lower_energy() {
        let m = build_tfim(4, 0.5, 1.0, Boundary::Open).unwrap();
        let p = QiteProblem::from_model(&m, 4).unwrap();
        let mut psi = StateVector::all_zero(4).unwrap();
        let mut e = p.energy(&psi).unwrap();
        for _ in 0..10 {
            let step = p.sweep(&psi, 0.05).unwrap();
            assert!(step.energy < e);
            e = step.energy;
            psi = step.state;
        }
    }

    #[test]
    fn single_site_converges() {
        let m = build_tfim(1, 0.5, 1.0, Boundary::Open).unwrap();
        let spec = m.exact_spectrum().unwrap();
        let p = QiteProblem::from_model(&m, 1).unwrap();
        let mut psi = StateVector::all_zero(1).unwrap();
        for _ in 0..40 {
            psi = p.sweep(&psi, 0.1).unwrap().state;
        }
        assert!(spec.ground_fidelity(&psi).unwrap() > 1.0 - 1e-4);
    }

    #[test]
    fn generator_serializes() {
        let g = QiteGenerator { n_qubits: 2, domain: vec![0, 1], coefficients: vec![0.5; 16], residual: 0.1 };
        let back: QiteGenerator = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
