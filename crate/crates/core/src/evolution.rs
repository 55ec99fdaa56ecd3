//! Exact imaginary-time evolution and the double-bracket unitary step.
//!
//! These are the references the approximate methods are checked against, so
//! every exponential here is exact (spectral), never Trotterized.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::statespace::{normalize, DenseOperator, HermitianSpectrum, StateVector};

/// Finite-difference step used by the derivative checks.
pub const FD_STEP: f64 = 1e-5;

/// Norm below which a state counts as an eigenstate (zero energy variance).
const VARIANCE_FLOOR: f64 = 1e-14;

/// Caches the spectrum of `H` so repeated evolutions cost one matrix-vector
/// product pair each.
#[derive(Clone, Debug)]
pub struct ImaginaryTimePropagator {
    spectrum: HermitianSpectrum,
}

impl ImaginaryTimePropagator {
    pub fn new(h: &DenseOperator) -> Result<Self> {
        Ok(Self { spectrum: h.spectrum()? })
    }

    pub fn spectrum(&self) -> &HermitianSpectrum {
        &self.spectrum
    }

    /// `normalize(exp(-τH) ψ)`. Negative τ runs the flow backwards.
    pub fn evolve_signed(&self, psi: &StateVector, tau: f64) -> Result<StateVector> {
        if psi.dim() != self.spectrum.eigenvalues.len() {
            return Err(Error::DimensionMismatch { expected: self.spectrum.eigenvalues.len(), found: psi.dim() });
        }
        if tau == 0.0 {
            return Ok(psi.clone());
        }
        // Shift by the extremal eigenvalue so the largest factor is exactly 1.
        let shift = if tau > 0.0 {
            self.spectrum.eigenvalues[0]
        } else {
            *self.spectrum.eigenvalues.last().unwrap()
        };
        let raw = self.spectrum.apply_fn(psi.amplitudes(), |l| C64::new((-tau * (l - shift)).exp(), 0.0));
        normalize(&StateVector::from_amplitudes(raw)?)
    }

    pub fn evolve(&self, psi: &StateVector, tau: f64) -> Result<StateVector> {
        if tau < 0.0 || !tau.is_finite() {
            return Err(invalid(format!("imaginary time must be finite and >= 0, got {tau}")));
        }
        self.evolve_signed(psi, tau)
    }

    /// States at each of `taus`.
    pub fn trajectory(&self, psi0: &StateVector, taus: &[f64]) -> Result<Vec<StateVector>> {
        taus.iter().map(|&t| self.evolve(psi0, t)).collect()
    }

    /// Smallest `τ` (to relative precision 1e-10) at which the ground-state
    /// fidelity of `normalize(exp(-τH) ψ0)` reaches `1 - infidelity`.
    ///
    /// Eigenvalues within `degeneracy_tol` of the lowest count as ground.
    pub fn convergence_time(&self, psi0: &StateVector, infidelity: f64, degeneracy_tol: f64) -> Result<f64> {
        if !(infidelity > 0.0 && infidelity < 1.0) {
            return Err(invalid(format!("infidelity target must lie in (0, 1), got {infidelity}")));
        }
        let weights: Vec<f64> = self.spectrum.eigenvectors.ad_mul(psi0.amplitudes()).iter().map(|c| c.norm_sqr()).collect();
        let e0 = self.spectrum.eigenvalues[0];
        let gaps: Vec<f64> = self.spectrum.eigenvalues.iter().map(|l| l - e0).collect();
        let ground: f64 = weights.iter().zip(&gaps).filter(|(_, &g)| g <= degeneracy_tol).map(|(w, _)| w).sum();
        if ground <= 0.0 {
            return Err(Error::OrthogonalStates);
        }
        let fidelity = |tau: f64| {
            let total: f64 = weights.iter().zip(&gaps).map(|(w, g)| w * (-2.0 * tau * g).exp()).sum();
            (ground / total).sqrt()
        };
        let target = 1.0 - infidelity;
        if fidelity(0.0) >= target {
            return Ok(0.0);
        }
        let mut hi = 1.0;
        while fidelity(hi) < target {
            hi *= 2.0;
            if hi > 1e12 {
                return Err(invalid("ground-state fidelity target not reachable"));
            }
        }
        let mut lo = 0.0;
        while hi - lo > 1e-10 * hi {
            let mid = 0.5 * (lo + hi);
            if fidelity(mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

/// `normalize(exp(-τH) ψ0)`.
///
/// Convergence to the ground state needs `<E_0|ψ0> != 0`; that is not checked.
pub fn ite_evolve(h: &DenseOperator, psi0: &StateVector, tau: f64) -> Result<StateVector> {
    if tau < 0.0 {
        return Err(invalid(format!("imaginary time must be >= 0, got {tau}")));
    }
    if tau == 0.0 {
        return Ok(psi0.clone());
    }
    ImaginaryTimePropagator::new(h)?.evolve(psi0, tau)
}

/// One normalized imaginary-time step.
pub fn ite_step(h: &DenseOperator, psi: &StateVector, dtau: f64) -> Result<StateVector> {
    if dtau.is_nan() || dtau <= 0.0 {
        return Err(invalid(format!("time step must be > 0, got {dtau}")));
    }
    ite_evolve(h, psi, dtau)
}

fn energy_and_deviation(h: &DenseOperator, psi: &StateVector) -> Result<(f64, DVector<C64>)> {
    let hpsi = h.apply(psi)?.into_amplitudes();
    let e = psi.amplitudes().dotc(&hpsi).re;
    let dev = hpsi - psi.amplitudes() * C64::new(e, 0.0);
    Ok((e, dev))
}

/// Residual of the normalized imaginary-time flow equation,
/// `‖ ∂τψ + (H - E)ψ ‖`, with `∂τψ` from a centered difference of step `dtau`.
///
/// The truncation error is `O(dtau²)`.
pub fn wick_residual(h: &DenseOperator, psi: &StateVector, dtau: f64) -> Result<f64> {
    if dtau.is_nan() || dtau <= 0.0 {
        return Err(invalid(format!("difference step must be > 0, got {dtau}")));
    }
    let psi = normalize(psi)?;
    let prop = ImaginaryTimePropagator::new(h)?;
    let fwd = prop.evolve_signed(&psi, dtau)?;
    let bwd = prop.evolve_signed(&psi, -dtau)?;
    let deriv = (fwd.amplitudes() - bwd.amplitudes()) / C64::new(2.0 * dtau, 0.0);
    let (_, dev) = energy_and_deviation(h, &psi)?;
    Ok((deriv + dev).norm())
}

/// `[ρ, H]` with `ρ = |ψ><ψ|`. Anti-Hermitian.
pub fn double_bracket_generator(h: &DenseOperator, psi: &StateVector) -> Result<DenseOperator> {
    let psi = normalize(psi)?;
    let v = psi.amplitudes();
    let rho: DMatrix<C64> = v * v.adjoint();
    DenseOperator::new(&rho * h.matrix() - h.matrix() * &rho)
}

/// Residual of the Brockett double-bracket flow `∂τρ = [[ρ, H], ρ]` along exact
/// imaginary time, with `∂τρ` from a centered difference of step `dtau`.
pub fn brockett_residual(h: &DenseOperator, psi: &StateVector, dtau: f64) -> Result<f64> {
    if dtau.is_nan() || dtau <= 0.0 {
        return Err(invalid(format!("difference step must be > 0, got {dtau}")));
    }
    let psi = normalize(psi)?;
    let prop = ImaginaryTimePropagator::new(h)?;
    let proj = |s: &StateVector| s.amplitudes() * s.amplitudes().adjoint();
    let drho = (proj(&prop.evolve_signed(&psi, dtau)?) - proj(&prop.evolve_signed(&psi, -dtau)?))
        / C64::new(2.0 * dtau, 0.0);
    let rho = proj(&psi);
    let comm = &rho * h.matrix() - h.matrix() * &rho;
    let flow = &comm * &rho - &rho * &comm;
    Ok((drho - flow).norm())
}

/// `exp(s[ρ, H]) ψ` with `ρ = |ψ><ψ|`.
///
/// The generator only acts on `span{ψ, Hψ}`; with `φ = (H - E)ψ / sqrt(V)` it
/// rotates `ψ -> cos(s√V) ψ - sin(s√V) φ`, which is what this evaluates. The
/// step is exactly unitary for every `s`.
pub fn db_qite_step(h: &DenseOperator, psi: &StateVector, s: f64) -> Result<StateVector> {
    let psi = normalize(psi)?;
    let (_, dev) = energy_and_deviation(h, &psi)?;
    let sigma = dev.norm();
    if s == 0.0 || sigma < VARIANCE_FLOOR {
        return Ok(psi);
    }
    let theta = s * sigma;
    let out = psi.amplitudes() * C64::new(theta.cos(), 0.0) - dev * C64::new(theta.sin() / sigma, 0.0);
    Ok(psi.with_amplitudes(out))
}

/// Energy `E` and variance `V` of `ψ` under `H`.
pub fn energy_moments(h: &DenseOperator, psi: &StateVector) -> Result<(f64, f64)> {
    let psi = normalize(psi)?;
    let (e, dev) = energy_and_deviation(h, &psi)?;
    Ok((e, dev.norm_squared()))
}
