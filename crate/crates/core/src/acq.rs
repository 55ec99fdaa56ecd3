//! Adaptive compressed QITE.
//!
//! Each outer step runs one QITE sweep, merges its generators into the
//! single one-parameter unitary `V(t) = exp(-i t Σ_k A_k)`, and picks the
//! time `t` by a step policy. The run ends once a fresh sweep no longer lowers
//! the energy, or once the chosen unitary cannot lower it either.

use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::evolution::energy_moments;
use crate::geometry::golden_section;
use crate::qite::{QiteGenerator, QiteProblem};
use crate::statespace::{expectation, DenseOperator, HermitianSpectrum, StateVector, ZERO_NORM};

/// Below this `|E2|` the Newton step falls back to the default step.
pub const NEWTON_CURVATURE_FLOOR: f64 = 1e-12;

/// Registers up to this size get an exact spectral norm.
pub const EXACT_NORM_QUBITS: usize = 10;

/// Golden-section tolerance for the optional line-search refinement.
pub const REFINE_TOL: f64 = 1e-6;

/// Maximum halvings when a Newton or variance-bound step overshoots.
pub const MAX_BACKTRACK: usize = 30;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepPolicy {
    /// One increment of `dtau` per sweep.
    Fixed,
    /// Increments of `dtau` until the energy stops decreasing.
    #[default]
    GridLineSearch,
    /// Newton step on the energy along the compressed generator.
    Newton,
    /// Variance lower bound on the cooling time.
    VarianceBound,
}

impl FromStr for StepPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(Self::Fixed),
            "grid_line_search" | "grid" => Ok(Self::GridLineSearch),
            "newton" => Ok(Self::Newton),
            "variance_bound" => Ok(Self::VarianceBound),
            other => Err(Error::Config(format!(
                "unknown policy {other:?}; expected fixed, grid_line_search, newton or variance_bound"
            ))),
        }
    }
}

/// `Σ_k A_k` on the full register.
pub fn compressed_generator(generators: &[QiteGenerator]) -> Result<DenseOperator> {
    let first = generators.first().ok_or_else(|| invalid("no generators to compress"))?;
    let n = first.n_qubits;
    let mut sum = DenseOperator::zeros(n);
    for g in generators {
        if g.n_qubits != n {
            return Err(Error::DimensionMismatch { expected: n, found: g.n_qubits });
        }
        sum = sum.add(&g.to_dense()?)?;
    }
    Ok(sum)
}

/// `exp(-i t Σ_k A_k)`.
pub fn compressed_unitary(generators: &[QiteGenerator], t: f64) -> Result<DenseOperator> {
    Ok(CompressedUnitary::new(generators)?.matrix(t))
}

/// `V(t) = exp(-i t A)` with `A` diagonalized once so that many `t` are cheap.
#[derive(Clone, Debug)]
pub struct CompressedUnitary {
    generator: DenseOperator,
    spectrum: HermitianSpectrum,
}

impl CompressedUnitary {
    pub fn new(generators: &[QiteGenerator]) -> Result<Self> {
        Self::from_generator(compressed_generator(generators)?)
    }

    pub fn from_generator(generator: DenseOperator) -> Result<Self> {
        let spectrum = generator.spectrum()?;
        Ok(Self { generator, spectrum })
    }

    pub fn generator(&self) -> &DenseOperator {
        &self.generator
    }

    pub fn matrix(&self, t: f64) -> DenseOperator {
        DenseOperator::new(self.spectrum.map(|l| C64::from_polar(1.0, -t * l)))
            .expect("square matrix")
    }

    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        if psi.dim() != self.generator.dim() {
            return Err(Error::DimensionMismatch { expected: self.generator.n_qubits(), found: psi.n_qubits() });
        }
        let amps = self.spectrum.apply_fn(psi.amplitudes(), |l| C64::from_polar(1.0, -t * l));
        StateVector::from_amplitudes(amps)
    }
}

/// First and second derivative at `s = 0` of `E(s) = <ψ|e^{isA} H e^{-isA}|ψ>`.
///
/// `E1 = i<[A, H]> = -2 Im<Aψ|Hψ>` and
/// `E2 = -<[A, [A, H]]> = 2<Aψ|H|Aψ> - 2 Re<A²ψ|Hψ>`.
pub fn energy_derivatives(a: &DenseOperator, h: &DenseOperator, psi: &StateVector) -> Result<(f64, f64)> {
    if !a.is_hermitian() || !h.is_hermitian() {
        return Err(Error::NotHermitian(f64::NAN));
    }
    let a_psi = a.apply(psi)?;
    let h_psi = h.apply(psi)?;
    let aa_psi = a.apply(&a_psi)?;
    let ha_psi = h.apply(&a_psi)?;
    let e1 = -2.0 * a_psi.inner(&h_psi)?.im;
    let e2 = 2.0 * a_psi.inner(&ha_psi)?.re - 2.0 * aa_psi.inner(&h_psi)?.re;
    Ok((e1, e2))
}

/// Newton minimizer `-E1/E2`, using `|E2|` on negative curvature and
/// `default_step` on vanishing curvature.
pub fn newton_step(e1: f64, e2: f64, default_step: f64) -> f64 {
    if e2.abs() < NEWTON_CURVATURE_FLOOR {
        default_step
    } else {
        -e1 / e2.abs()
    }
}

/// Spectral norm; exact for small registers, power iteration above
/// [`EXACT_NORM_QUBITS`].
pub fn operator_norm(h: &DenseOperator) -> Result<f64> {
    if h.n_qubits() <= EXACT_NORM_QUBITS {
        return Ok(h.spectrum()?.spectral_norm());
    }
    power_norm(h)
}

/// Largest `|λ|` of a Hermitian operator by power iteration.
pub(crate) fn power_norm(h: &DenseOperator) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let start = StateVector::random(h.n_qubits(), &mut rng)?;
    let mut v: DVector<C64> = start.into_amplitudes();
    let mut estimate = 0.0;
    for _ in 0..10_000 {
        let w = h.matrix() * &v;
        let next = w.norm();
        if next < ZERO_NORM {
            return Ok(0.0);
        }
        v = w / C64::new(next, 0.0);
        if (next - estimate).abs() <= 1e-12 * next {
            return Ok(next);
        }
        estimate = next;
    }
    Ok(estimate)
}

/// Cooling-time lower bound `V / (4 ‖H‖ <H²>)`.
pub fn variance_bound_step(h: &DenseOperator, psi: &StateVector) -> Result<f64> {
    variance_bound_with_norm(h, operator_norm(h)?, psi)
}

/// As [`variance_bound_step`] with a precomputed `‖H‖`.
pub fn variance_bound_with_norm(h: &DenseOperator, norm: f64, psi: &StateVector) -> Result<f64> {
    if norm.is_nan() || norm <= 0.0 {
        return Err(invalid("variance bound needs a non-zero Hamiltonian"));
    }
    let (e, v) = energy_moments(h, psi)?;
    if v <= ZERO_NORM {
        return Ok(0.0);
    }
    Ok(v / (4.0 * norm * (v + e * e)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineSearchOptions {
    /// Cap on energy probes.
    pub max_probes: usize,
    /// Golden-section refinement of the final bracket.
    pub refine: bool,
}

impl Default for LineSearchOptions {
    fn default() -> Self {
        Self { max_probes: 10_000, refine: false }
    }
}

/// Outcome of one line search along `V(t)`.
#[derive(Clone, Debug)]
pub struct LineSearch {
    /// Number of accepted increments `l_r`; zero when the first probe fails.
    pub steps: usize,
    pub time: f64,
    pub state: StateVector,
    pub energy: f64,
    pub probes: usize,
}

/// Advance `t` in increments of `dtau` while the energy keeps decreasing.
///
/// Returns the last time before the energy failed to decrease. When the
/// very first probe does not decrease it, `steps == 0` and `psi` is returned
/// unchanged.
pub fn line_search_stop(
    unitary: &CompressedUnitary,
    h: &DenseOperator,
    psi: &StateVector,
    dtau: f64,
    options: &LineSearchOptions,
) -> Result<LineSearch> {
    if !(dtau.is_finite() && dtau > 0.0) {
        return Err(invalid(format!("line search increment must be finite and > 0, got {dtau}")));
    }
    let mut best = LineSearch { steps: 0, time: 0.0, state: psi.clone(), energy: expectation(psi, h)?, probes: 0 };
    loop {
        if best.probes >= options.max_probes {
            break;
        }
        let t = (best.steps + 1) as f64 * dtau;
        let state = unitary.evolve(psi, t)?;
        let energy = expectation(&state, h)?;
        best.probes += 1;
        if energy >= best.energy {
            break;
        }
        best = LineSearch { steps: best.steps + 1, time: t, state, energy, probes: best.probes };
    }
    if options.refine && best.steps > 0 {
        let lo = (best.steps - 1) as f64 * dtau;
        let hi = (best.steps + 1) as f64 * dtau;
        let mut probes = 0;
        let (t, e) = golden_section(
            |t| {
                probes += 1;
                expectation(&unitary.evolve(psi, t)?, h)
            },
            lo,
            hi,
            REFINE_TOL,
        )?;
        best.probes += probes;
        if e < best.energy && t > 0.0 {
            best.state = unitary.evolve(psi, t)?;
            best.energy = e;
            best.time = t;
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcqOptions {
    /// QITE time step, grid increment and fallback step.
    pub dtau: f64,
    pub policy: StepPolicy,
    /// Cap on outer steps (QITE sweeps).
    pub max_steps: usize,
    pub line_search: LineSearchOptions,
}

impl AcqOptions {
    pub fn new(dtau: f64, policy: StepPolicy) -> Self {
        Self { dtau, policy, max_steps: 1000, line_search: LineSearchOptions::default() }
    }
}

/// One accepted ACQ step.
#[derive(Clone, Debug)]
pub struct AcqRecord {
    /// 1-based step index.
    pub step: usize,
    pub generators: Vec<QiteGenerator>,
    pub time: f64,
    pub line_search_steps: usize,
    pub energy: f64,
    /// Energy after the plain QITE sweep that produced the generators.
    pub qite_energy: f64,
    /// QITE sweeps run so far, this one included.
    pub qite_calls: usize,
    pub probes: usize,
    pub state: StateVector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// A fresh QITE sweep raised the energy.
    QiteIncrease,
    /// The compressed unitary could not lower the energy.
    NoDescent,
    MaxSteps,
}

#[derive(Clone, Debug)]
pub struct AcqRun {
    pub initial_energy: f64,
    pub records: Vec<AcqRecord>,
    /// All QITE sweeps, including the one that triggered the stop.
    pub qite_calls: usize,
    pub stop: StopReason,
}

impl AcqRun {
    pub fn final_state<'a>(&'a self, psi0: &'a StateVector) -> &'a StateVector {
        self.records.last().map_or(psi0, |r| &r.state)
    }

    pub fn final_energy(&self) -> f64 {
        self.records.last().map_or(self.initial_energy, |r| r.energy)
    }
}

/// Adaptive compressed QITE from `psi0`.
pub fn acq_run(problem: &QiteProblem, psi0: &StateVector, options: &AcqOptions) -> Result<AcqRun> {
    if !(options.dtau.is_finite() && options.dtau > 0.0) {
        return Err(invalid(format!("dtau must be finite and > 0, got {}", options.dtau)));
    }
    let h = problem.hamiltonian();
    let norm = match options.policy {
        StepPolicy::VarianceBound => operator_norm(h)?,
        _ => 0.0,
    };
    let initial_energy = problem.energy(psi0)?;
    let mut run = AcqRun { initial_energy, records: Vec::new(), qite_calls: 0, stop: StopReason::MaxSteps };
    let mut psi = psi0.clone();
    let mut energy = initial_energy;
    for step in 1..=options.max_steps {
        let sweep = problem.sweep(&psi, options.dtau)?;
        run.qite_calls += 1;
        if sweep.energy > energy {
            run.stop = StopReason::QiteIncrease;
            return Ok(run);
        }
        let unitary = CompressedUnitary::new(&sweep.generators)?;
        let chosen = match options.policy {
            StepPolicy::GridLineSearch => line_search_stop(&unitary, h, &psi, options.dtau, &options.line_search)?,
            StepPolicy::Fixed => {
                let state = unitary.evolve(&psi, options.dtau)?;
                let e = expectation(&state, h)?;
                LineSearch { steps: usize::from(e < energy), time: options.dtau, state, energy: e, probes: 1 }
            }
            StepPolicy::Newton => {
                let (e1, e2) = energy_derivatives(unitary.generator(), h, &psi)?;
                backtrack(&unitary, h, &psi, energy, newton_step(e1, e2, options.dtau))?
            }
            StepPolicy::VarianceBound => {
                backtrack(&unitary, h, &psi, energy, variance_bound_with_norm(h, norm, &psi)?)?
            }
        };
        if chosen.steps == 0 || chosen.energy >= energy {
            run.stop = StopReason::NoDescent;
            return Ok(run);
        }
        psi = chosen.state.clone();
        energy = chosen.energy;
        run.records.push(AcqRecord {
            step,
            generators: sweep.generators,
            time: chosen.time,
            line_search_steps: chosen.steps,
            energy,
            qite_energy: sweep.energy,
            qite_calls: run.qite_calls,
            probes: chosen.probes,
            state: chosen.state,
        });
    }
    Ok(run)
}

/// Try `t`, halving until the energy drops below `e0`.
fn backtrack(unitary: &CompressedUnitary, h: &DenseOperator, psi: &StateVector, e0: f64, t: f64) -> Result<LineSearch> {
    let mut fail = LineSearch { steps: 0, time: 0.0, state: psi.clone(), energy: e0, probes: 0 };
    if !(t.is_finite() && t > 0.0) {
        return Ok(fail);
    }
    let mut t = t;
    for _ in 0..=MAX_BACKTRACK {
        let state = unitary.evolve(psi, t)?;
        let e = expectation(&state, h)?;
        fail.probes += 1;
        if e < e0 {
            return Ok(LineSearch { steps: 1, time: t, state, energy: e, probes: fail.probes });
        }
        t /= 2.0;
    }
    Ok(fail)
}
