//! Geometry of pure states: Fubini–Study distance, geodesics between rays,
//! closed-form double-bracket times, and a distance between trajectories.

use std::io::{BufRead, Write};
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::evolution::{energy_moments, ImaginaryTimePropagator};
use crate::statespace::{normalize, DenseOperator, StateVector, ZERO_NORM};

/// Overlaps below this magnitude are treated as orthogonal.
pub const ORTHOGONAL_TOL: f64 = 1e-12;

/// Grid size for the coarse scan of the inner infimum.
pub const INFIMUM_GRID: usize = 256;

/// Golden-section tolerance for the inner infimum.
pub const INFIMUM_TOL: f64 = 1e-8;

/// Fubini–Study distance `arccos |<a|b>|` between the rays of `a` and `b`.
///
/// Computed as `atan2(‖b⊥‖, |<a|b>|)` so that nearby rays keep full relative
/// precision. Inputs need not be normalized.
pub fn fs_distance(a: &StateVector, b: &StateVector) -> Result<f64> {
    let a = normalize(a)?;
    let b = normalize(b)?;
    let ov = a.inner(&b)?;
    Ok(ray_distance(a.amplitudes(), b.amplitudes(), ov))
}

fn ray_distance(a: &nalgebra::DVector<C64>, b: &nalgebra::DVector<C64>, ov: C64) -> f64 {
    let perp = (b - a * ov).norm();
    perp.atan2(ov.norm())
}

/// Point at fraction `gamma` along the geodesic from the ray of `psi_a` to
/// the ray of `psi_b`.
///
/// `gamma = 0` returns `psi_a`; `gamma = 1` returns `psi_b` rephased to be in
/// phase with `psi_a`. Identical rays give `psi_a` for every `gamma`.
pub fn geodesic_point(psi_a: &StateVector, psi_b: &StateVector, gamma: f64) -> Result<StateVector> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(invalid(format!("geodesic fraction must lie in [0, 1], got {gamma}")));
    }
    let a = normalize(psi_a)?;
    let b = normalize(psi_b)?;
    let c = b.inner(&a)?;
    if c.norm() < ORTHOGONAL_TOL {
        return Err(Error::OrthogonalStates);
    }
    let delta = ray_distance(a.amplitudes(), b.amplitudes(), c.conj());
    if delta < ORTHOGONAL_TOL {
        return Ok(a);
    }
    let phase = c / c.norm();
    let s = delta.sin();
    let amps = a.amplitudes() * C64::new(((1.0 - gamma) * delta).sin() / s, 0.0)
        + b.amplitudes() * (phase * ((gamma * delta).sin() / s));
    normalize(&a.with_amplitudes(amps))
}

/// Time `s` for which `exp(s[ρ0, H]) ψ0` is the ground state of a 2×2 `H`.
///
/// Bloch components are taken in the eigenbasis of `H` with the ground state
/// on `+z`: `s = 2 arccos(√((1 + r3)/2)) / (ω √(1 − r3²))`, where `ω` is the
/// gap. A state already in the ground ray is a fixed point and gives `0`.
pub fn rank2_geodesic_time(psi0: &StateVector, h: &DenseOperator) -> Result<f64> {
    if psi0.n_qubits() != 1 || h.n_qubits() != 1 {
        return Err(invalid("rank-2 geodesic time needs a single qubit state and a 2x2 Hamiltonian"));
    }
    let spectrum = h.spectrum()?;
    let omega = spectrum.eigenvalues[1] - spectrum.eigenvalues[0];
    if omega <= 1e-12 * spectrum.spectral_norm().max(1.0) {
        return Err(invalid("degenerate Hamiltonian has no unique ground state"));
    }
    let psi = normalize(psi0)?;
    let ground = spectrum.eigenvectors.column(0);
    let p = ground.dotc(psi.amplitudes()).norm_sqr().min(1.0);
    if p < 1e-15 {
        return Err(Error::OrthogonalStates);
    }
    if 1.0 - p < 1e-15 {
        return Ok(0.0);
    }
    let r3 = 2.0 * p - 1.0;
    Ok(2.0 * ((1.0 + r3) / 2.0).sqrt().acos() / (omega * (1.0 - r3 * r3).sqrt()))
}

/// Time `s` for which `exp(s[ρ, H]) ψ` lies on the ray of `(H − α) ψ`.
///
/// `s = −arccos((E − α) / √(V + (E − α)²)) / √V` with `E`, `V` the energy
/// mean and variance of `ψ`.
pub fn suzuki_shift_time(h: &DenseOperator, alpha: f64, psi: &StateVector) -> Result<f64> {
    let (e, v) = energy_moments(h, psi)?;
    if v < ZERO_NORM {
        return Err(Error::ZeroVariance(v));
    }
    let d = e - alpha;
    let cos = (d / (v + d * d).sqrt()).clamp(-1.0, 1.0);
    Ok(-cos.acos() / v.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryKind {
    Geodesic,
    Ite,
    QitePiecewise,
    AcqPiecewise,
}

/// A curve of rays sampled at strictly increasing parameters.
///
/// Between samples the curve follows the geodesic joining neighbouring
/// samples. Trajectories built by [`Trajectory::ite`] are evaluated exactly
/// at every parameter instead.
#[derive(Clone, Debug)]
pub struct Trajectory {
    kind: TrajectoryKind,
    params: Vec<f64>,
    states: Vec<StateVector>,
    exact: Option<Arc<ImaginaryTimePropagator>>,
}

impl Trajectory {
    pub fn from_samples(kind: TrajectoryKind, params: Vec<f64>, states: Vec<StateVector>) -> Result<Self> {
        if params.len() != states.len() {
            return Err(invalid(format!("{} parameters for {} states", params.len(), states.len())));
        }
        if states.len() < 2 {
            return Err(invalid("a trajectory needs at least 2 samples"));
        }
        if params.iter().any(|p| !p.is_finite()) || params.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("trajectory parameters must be finite and strictly increasing"));
        }
        let n = states[0].n_qubits();
        let states = states
            .iter()
            .map(|s| {
                if s.n_qubits() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: s.n_qubits() });
                }
                if !s.is_normalized(1e-8) {
                    return Err(invalid(format!("trajectory state has norm {}", s.norm())));
                }
                if s.is_normalized(1e-14) {
                    Ok(s.clone())
                } else {
                    normalize(s)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        for w in states.windows(2) {
            if w[0].inner(&w[1])?.norm() < ORTHOGONAL_TOL {
                return Err(Error::OrthogonalStates);
            }
        }
        Ok(Self { kind, params, states, exact: None })
    }

    /// The geodesic from `a` to `b`, parametrized on `[0, 1]`.
    pub fn geodesic(a: &StateVector, b: &StateVector) -> Result<Self> {
        Self::from_samples(TrajectoryKind::Geodesic, vec![0.0, 1.0], vec![normalize(a)?, normalize(b)?])
    }

    /// Exact imaginary-time trajectory on `[0, tau_max]` with `samples`
    /// stored snapshots.
    pub fn ite(h: &DenseOperator, psi0: &StateVector, tau_max: f64, samples: usize) -> Result<Self> {
        if (tau_max.is_nan() || tau_max <= 0.0) || samples < 2 {
            return Err(invalid("ITE trajectory needs tau_max > 0 and at least 2 samples"));
        }
        let prop = ImaginaryTimePropagator::new(h)?;
        let params: Vec<f64> = (0..samples).map(|i| tau_max * i as f64 / (samples - 1) as f64).collect();
        let states = prop.trajectory(psi0, &params)?;
        let mut t = Self::from_samples(TrajectoryKind::Ite, params, states)?;
        t.exact = Some(Arc::new(prop));
        Ok(t)
    }

    pub fn kind(&self) -> TrajectoryKind {
        self.kind
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn n_qubits(&self) -> usize {
        self.states[0].n_qubits()
    }

    pub fn span(&self) -> (f64, f64) {
        (self.params[0], *self.params.last().unwrap())
    }

    /// State at parameter `p` within the sampled range.
    pub fn evaluate_at(&self, p: f64) -> Result<StateVector> {
        let (lo, hi) = self.span();
        if !(lo..=hi).contains(&p) {
            return Err(invalid(format!("parameter {p} outside [{lo}, {hi}]")));
        }
        if let Some(prop) = &self.exact {
            return prop.evolve(&self.states[0], p - lo);
        }
        let i = self.params.partition_point(|&q| q <= p).clamp(1, self.params.len() - 1) - 1;
        let gamma = ((p - self.params[i]) / (self.params[i + 1] - self.params[i])).clamp(0.0, 1.0);
        geodesic_point(&self.states[i], &self.states[i + 1], gamma)
    }

    /// State at rescaled parameter `x ∈ [0, 1]`.
    pub fn evaluate(&self, x: f64) -> Result<StateVector> {
        let (lo, hi) = self.span();
        self.evaluate_at((lo + x.clamp(0.0, 1.0) * (hi - lo)).min(hi))
    }

    /// CSV with columns `param, re_0, im_0, re_1, im_1, ...`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "param")?;
        for i in 0..self.states[0].dim() {
            write!(w, ",re_{i},im_{i}")?;
        }
        writeln!(w)?;
        for (p, s) in self.params.iter().zip(&self.states) {
            write!(w, "{p}")?;
            for a in s.amplitudes().iter() {
                write!(w, ",{},{}", a.re, a.im)?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(kind: TrajectoryKind, r: R) -> Result<Self> {
        let mut params = Vec::new();
        let mut states = Vec::new();
        for (lineno, line) in r.lines().enumerate().skip(1) {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| invalid(format!("line {}: {e}", lineno + 1)))?;
            if fields.len() < 3 || fields.len() % 2 == 0 {
                return Err(invalid(format!("line {}: expected a parameter and re/im pairs", lineno + 1)));
            }
            params.push(fields[0]);
            let amps = fields[1..].chunks(2).map(|c| C64::new(c[0], c[1])).collect();
            states.push(StateVector::from_vec(amps)?);
        }
        Self::from_samples(kind, params, states)
    }
}

/// Piecewise-geodesic curve through `states` at `times`.
pub fn piecewise_geodesic(states: &[StateVector], times: &[f64]) -> Result<Trajectory> {
    Trajectory::from_samples(TrajectoryKind::QitePiecewise, times.to_vec(), states.to_vec())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceEstimator {
    /// Pointwise infimum over the second trajectory.
    #[default]
    Infimum,
    /// Both trajectories evaluated at the same rescaled parameter; an upper
    /// bound on the infimum form.
    SharedParameter,
}

/// `∫_0^1 inf_y d_FS(S1(x), S2(y)) dx` over rescaled parameters, by composite
/// Simpson with `quadrature_points` nodes (rounded up to odd).
pub fn trajectory_distance(
    s1: &Trajectory,
    s2: &Trajectory,
    quadrature_points: usize,
    estimator: DistanceEstimator,
) -> Result<f64> {
    if quadrature_points < 3 {
        return Err(invalid(format!("need at least 3 quadrature points, got {quadrature_points}")));
    }
    if s1.n_qubits() != s2.n_qubits() {
        return Err(Error::DimensionMismatch { expected: s1.n_qubits(), found: s2.n_qubits() });
    }
    let m = quadrature_points | 1;
    let xs: Vec<f64> = (0..m).map(|j| j as f64 / (m - 1) as f64).collect();
    let grid: Vec<StateVector> = match estimator {
        DistanceEstimator::Infimum => (0..INFIMUM_GRID)
            .into_par_iter()
            .map(|k| s2.evaluate(k as f64 / (INFIMUM_GRID - 1) as f64))
            .collect::<Result<_>>()?,
        DistanceEstimator::SharedParameter => Vec::new(),
    };
    let values: Vec<f64> = xs
        .par_iter()
        .map(|&x| {
            let p = s1.evaluate(x)?;
            match estimator {
                DistanceEstimator::SharedParameter => fs_distance(&p, &s2.evaluate(x)?),
                DistanceEstimator::Infimum => infimum_distance(&p, s2, &grid),
            }
        })
        .collect::<Result<_>>()?;
    let h = 1.0 / (m - 1) as f64;
    let interior: f64 = values[1..m - 1].iter().enumerate().map(|(i, v)| if i % 2 == 0 { 4.0 * v } else { 2.0 * v }).sum();
    Ok(h / 3.0 * (values[0] + interior + values[m - 1]))
}

fn infimum_distance(p: &StateVector, s2: &Trajectory, grid: &[StateVector]) -> Result<f64> {
    let dists = grid.iter().map(|g| fs_distance(p, g)).collect::<Result<Vec<_>>>()?;
    let (k, &best) = dists.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let step = 1.0 / (grid.len() - 1) as f64;
    let lo = (k as f64 - 1.0).max(0.0) * step;
    let hi = ((k + 1) as f64 * step).min(1.0);
    let refined = golden_section(|y| s2.evaluate(y).and_then(|q| fs_distance(p, &q)), lo, hi, INFIMUM_TOL)?;
    Ok(best.min(refined.1))
}

/// Minimize a unimodal `f` on `[a, b]`; returns `(argmin, min)`.
pub fn golden_section(mut f: impl FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}
