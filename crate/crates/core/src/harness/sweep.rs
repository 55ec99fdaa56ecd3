use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, InitialState, Method};
use super::run::{simulate, CSV_VERSION};
use crate::error::{invalid, Result};
use crate::evolution::ImaginaryTimePropagator;
use crate::geometry::{trajectory_distance, DistanceEstimator, Trajectory};
use crate::hamiltonian::{build_tfim, Boundary, DEGENERACY_TOL};
use crate::statespace::{DenseOperator, StateVector};

/// Largest register the distance sweep accepts.
pub const DISTANCE_MAX_QUBITS: usize = 10;

pub const FIDELITY_COLUMNS: &str = "method,n,domain,max_fidelity,final_fidelity,steps,qite_calls,two_qubit_gates,rotations";
pub const DISTANCE_COLUMNS: &str = "n,tau_max,convergence_time,gap,distance,shared_parameter_bound";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FidelityRow {
    pub method: Method,
    pub n: usize,
    pub domain: usize,
    pub max_fidelity: f64,
    pub final_fidelity: f64,
    pub steps: usize,
    pub qite_calls: usize,
    pub two_qubit_gates: usize,
    pub rotations: usize,
}

/// Maximum ground fidelity for every `(method, n, D)` combination, in that
/// nesting order. Runs execute in parallel; the output order is fixed.
pub fn fidelity_sweep(
    n_list: &[usize],
    domains: &[usize],
    methods: &[Method],
    base: &ExperimentConfig,
) -> Result<Vec<FidelityRow>> {
    let jobs: Vec<ExperimentConfig> = methods
        .iter()
        .flat_map(|&method| {
            n_list.iter().flat_map(move |&n| {
                domains.iter().map(move |&domain| ExperimentConfig { method, n, domain, output: None, ..base.clone() })
            })
        })
        .collect();
    for job in &jobs {
        job.validate()?;
    }
    jobs.par_iter()
        .map(|c| {
            let r = simulate(c)?;
            let last = r.final_row();
            Ok(FidelityRow {
                method: c.method,
                n: c.n,
                domain: c.effective_domain(),
                max_fidelity: r.max_fidelity(),
                final_fidelity: r.final_fidelity(),
                steps: r.steps(),
                qite_calls: last.qite_calls,
                two_qubit_gates: last.two_qubit_gates,
                rotations: last.rotations,
            })
        })
        .collect()
}

pub fn write_fidelity_csv<W: Write>(rows: &[FidelityRow], base: &ExperimentConfig, mut w: W) -> Result<()> {
    writeln!(w, "# acq-results v{CSV_VERSION} fidelity_sweep")?;
    writeln!(w, "# {}", base.summary())?;
    writeln!(w, "{FIDELITY_COLUMNS}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.method.name(),
            r.n,
            r.domain,
            r.max_fidelity,
            r.final_fidelity,
            r.steps,
            r.qite_calls,
            r.two_qubit_gates,
            r.rotations
        )?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceOptions {
    pub coupling: f64,
    pub field: f64,
    pub boundary: Boundary,
    pub initial_state: InitialState,
    pub seed: u64,
    /// Simpson nodes along the ITE trajectory.
    pub quadrature_points: usize,
    /// Length of every ITE trajectory. `None` uses the longest convergence
    /// time in the sweep, so all chain lengths share one time axis.
    pub tau_max: Option<f64>,
    /// Ground infidelity that defines a chain's convergence time.
    pub infidelity: f64,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            coupling: 0.5,
            field: 1.0,
            boundary: Boundary::Open,
            initial_state: InitialState::AllZero,
            seed: 0,
            quadrature_points: 201,
            tau_max: None,
            infidelity: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceRow {
    pub n: usize,
    pub tau_max: f64,
    /// Time at which ITE alone reaches the infidelity target for this `n`.
    pub convergence_time: f64,
    pub gap: f64,
    pub distance: f64,
    pub shared_parameter_bound: f64,
}

/// Distance between the ITE trajectory and the geodesic from the initial
/// state to the ground state, for each chain length.
pub fn distance_sweep(n_list: &[usize], options: &DistanceOptions) -> Result<Vec<DistanceRow>> {
    if let Some(&n) = n_list.iter().find(|&&n| n == 0 || n > DISTANCE_MAX_QUBITS) {
        return Err(invalid(format!("distance sweep supports 1..={DISTANCE_MAX_QUBITS} qubits, got {n}")));
    }
    if let Some(t) = options.tau_max {
        if !(t.is_finite() && t > 0.0) {
            return Err(invalid(format!("tau_max must be positive, got {t}")));
        }
    }
    let chains: Vec<Chain> = n_list.par_iter().map(|&n| Chain::new(n, options)).collect::<Result<_>>()?;
    let tau_max = options.tau_max.unwrap_or_else(|| chains.iter().map(|c| c.convergence_time).fold(0.0, f64::max));
    chains.par_iter().map(|c| c.row(tau_max, options.quadrature_points)).collect()
}

struct Chain {
    n: usize,
    gap: f64,
    convergence_time: f64,
    h: DenseOperator,
    psi0: StateVector,
    ground: StateVector,
}

impl Chain {
    fn new(n: usize, o: &DistanceOptions) -> Result<Self> {
        let model = build_tfim(n, o.coupling, o.field, o.boundary)?;
        let spectrum = model.exact_spectrum()?;
        let h = model.hamiltonian();
        let psi0 = o.initial_state.prepare(n, o.seed)?;
        let tol = DEGENERACY_TOL * spectrum.ground_energy().abs().max(1.0);
        let convergence_time = ImaginaryTimePropagator::new(&h)?.convergence_time(&psi0, o.infidelity, tol)?;
        Ok(Self { n, gap: spectrum.gap, convergence_time, h, psi0, ground: spectrum.ground_state })
    }

    fn row(&self, tau_max: f64, quadrature_points: usize) -> Result<DistanceRow> {
        let geodesic = Trajectory::geodesic(&self.psi0, &self.ground)?;
        let (distance, bound) = if tau_max == 0.0 {
            (0.0, 0.0)
        } else {
            let ite = Trajectory::ite(&self.h, &self.psi0, tau_max, 2)?;
            (
                trajectory_distance(&ite, &geodesic, quadrature_points, DistanceEstimator::Infimum)?,
                trajectory_distance(&ite, &geodesic, quadrature_points, DistanceEstimator::SharedParameter)?,
            )
        };
        Ok(DistanceRow {
            n: self.n,
            tau_max,
            convergence_time: self.convergence_time,
            gap: self.gap,
            distance,
            shared_parameter_bound: bound,
        })
    }
}

pub fn write_distance_csv<W: Write>(rows: &[DistanceRow], options: &DistanceOptions, mut w: W) -> Result<()> {
    writeln!(w, "# acq-results v{CSV_VERSION} distance_sweep")?;
    writeln!(
        w,
        "# coupling={} field={} boundary={} quadrature_points={} infidelity={} tau_max={}",
        options.coupling,
        options.field,
        serde_json::to_value(options.boundary)?.as_str().unwrap_or("?"),
        options.quadrature_points,
        options.infidelity,
        options.tau_max.map_or("auto".to_string(), |t| t.to_string())
    )?;
    writeln!(w, "{DISTANCE_COLUMNS}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.n, r.tau_max, r.convergence_time, r.gap, r.distance, r.shared_parameter_bound
        )?;
    }
    Ok(())
}
