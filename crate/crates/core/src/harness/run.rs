use std::io::Write;
use std::path::PathBuf;

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::config::{ExperimentConfig, Method};
use super::gates::{gate_count, GateCount};
use crate::acq::{
    acq_run, energy_derivatives, newton_step, operator_norm, variance_bound_with_norm, AcqOptions,
    LineSearchOptions, StepPolicy, StopReason, MAX_BACKTRACK,
};
use crate::error::Result;
use crate::evolution::{db_qite_step, double_bracket_generator, ImaginaryTimePropagator};
use crate::qite::{qite_run, QiteProblem};
use crate::statespace::{expectation, DenseOperator, StateVector};

/// Version tag written into every results file.
pub const CSV_VERSION: u32 = 1;

pub const RUN_COLUMNS: &str = "step,time,energy,fidelity,qite_calls,two_qubit_gates,rotations";

/// One row of a run: the state after `step` steps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRow {
    pub step: usize,
    /// Accumulated imaginary time (ITE, QITE) or unitary parameter (ACQ, DB-QITE).
    pub time: f64,
    pub energy: f64,
    pub fidelity: f64,
    pub qite_calls: usize,
    /// Cumulative estimate.
    pub two_qubit_gates: usize,
    pub rotations: usize,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub config: ExperimentConfig,
    pub ground_energy: f64,
    /// Row 0 is the initial state.
    pub rows: Vec<RunRow>,
    pub final_state: StateVector,
    pub stop: &'static str,
}

/// Rows where two runs first reach a common fidelity: the lower of the two
/// final fidelities minus `band`. Returns the target and both rows.
pub fn matched_rows<'a>(a: &'a RunResult, b: &'a RunResult, band: f64) -> (f64, &'a RunRow, &'a RunRow) {
    let target = a.final_fidelity().min(b.final_fidelity()) - band;
    let find = |r: &'a RunResult| r.first_reaching(target).expect("final row reaches the target");
    (target, find(a), find(b))
}

impl RunResult {
    pub fn final_row(&self) -> &RunRow {
        self.rows.last().expect("rows start with the initial state")
    }

    pub fn final_fidelity(&self) -> f64 {
        self.final_row().fidelity
    }

    pub fn max_fidelity(&self) -> f64 {
        self.rows.iter().map(|r| r.fidelity).fold(0.0, f64::max)
    }

    pub fn steps(&self) -> usize {
        self.rows.len() - 1
    }

    /// First row whose ground fidelity is at least `fidelity`.
    pub fn first_reaching(&self, fidelity: f64) -> Option<&RunRow> {
        self.rows.iter().find(|r| r.fidelity >= fidelity)
    }

    /// Default file name inside an output directory.
    pub fn file_name(&self) -> String {
        let c = &self.config;
        format!("run_{}_n{}_D{}.csv", c.method.name(), c.n, c.effective_domain())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# acq-results v{CSV_VERSION} run")?;
        writeln!(w, "# {}", self.config.summary())?;
        writeln!(w, "# ground_energy={} stop={}", self.ground_energy, self.stop)?;
        writeln!(w, "{RUN_COLUMNS}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.step, r.time, r.energy, r.fidelity, r.qite_calls, r.two_qubit_gates, r.rotations
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// Run `config` and, when it names an output directory, write the CSV there.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunResult> {
    let result = simulate(config)?;
    if let Some(dir) = &config.output {
        std::fs::create_dir_all(dir)?;
        let path: PathBuf = dir.join(result.file_name());
        std::fs::write(path, result.to_csv())?;
    }
    Ok(result)
}

/// Run `config` without touching the file system.
pub fn simulate(config: &ExperimentConfig) -> Result<RunResult> {
    config.validate()?;
    let model = config.model()?;
    let spectrum = model.exact_spectrum()?;
    let h = model.hamiltonian();
    let psi0 = config.initial_state.prepare(config.n, config.seed)?;
    let fidelity = |s: &StateVector| spectrum.ground_fidelity(s);
    let mut rows = vec![RunRow {
        step: 0,
        time: 0.0,
        energy: expectation(&psi0, &h)?,
        fidelity: fidelity(&psi0)?,
        qite_calls: 0,
        two_qubit_gates: 0,
        rotations: 0,
    }];
    let mut final_state = psi0.clone();
    let stop;

    match config.method {
        Method::Ite => {
            let prop = ImaginaryTimePropagator::new(&h)?;
            for k in 1..=config.max_steps {
                let tau = k as f64 * config.dtau;
                final_state = prop.evolve(&psi0, tau)?;
                rows.push(RunRow {
                    step: k,
                    time: tau,
                    energy: expectation(&final_state, &h)?,
                    fidelity: fidelity(&final_state)?,
                    qite_calls: 0,
                    two_qubit_gates: 0,
                    rotations: 0,
                });
            }
            stop = "max_steps";
        }
        Method::Qite => {
            let problem = QiteProblem::from_model(&model, config.effective_domain())?;
            let steps = qite_run(&problem, &psi0, config.dtau, config.max_steps, true)?;
            stop = if steps.len() < config.max_steps { "energy_increase" } else { "max_steps" };
            let mut gates = GateCount::default();
            for (k, s) in steps.iter().enumerate() {
                gates += gate_count(&s.generators, false);
                rows.push(RunRow {
                    step: k + 1,
                    time: (k + 1) as f64 * config.dtau,
                    energy: s.energy,
                    fidelity: fidelity(&s.state)?,
                    qite_calls: k + 1,
                    two_qubit_gates: gates.two_qubit,
                    rotations: gates.rotations,
                });
            }
            if let Some(s) = steps.last() {
                final_state = s.state.clone();
            }
        }
        Method::Acq => {
            let problem = QiteProblem::from_model(&model, config.effective_domain())?;
            let options = AcqOptions {
                dtau: config.dtau,
                policy: config.policy,
                max_steps: config.max_steps,
                line_search: LineSearchOptions { refine: config.refine, ..Default::default() },
            };
            let run = acq_run(&problem, &psi0, &options)?;
            stop = match run.stop {
                StopReason::QiteIncrease => "qite_increase",
                StopReason::NoDescent => "no_descent",
                StopReason::MaxSteps => "max_steps",
            };
            let mut gates = GateCount::default();
            let mut time = 0.0;
            for r in &run.records {
                gates += gate_count(&r.generators, true);
                time += r.time;
                rows.push(RunRow {
                    step: r.step,
                    time,
                    energy: r.energy,
                    fidelity: fidelity(&r.state)?,
                    qite_calls: r.qite_calls,
                    two_qubit_gates: gates.two_qubit,
                    rotations: gates.rotations,
                });
            }
            final_state = run.final_state(&psi0).clone();
        }
        Method::Dbqite => {
            let norm = operator_norm(&h)?;
            let mut psi = psi0.clone();
            let mut energy = rows[0].energy;
            let mut time = 0.0;
            let mut reason = "max_steps";
            for k in 1..=config.max_steps {
                let Some((s, next, e)) = db_step(&h, norm, &psi, energy, config)? else {
                    reason = "no_descent";
                    break;
                };
                psi = next;
                energy = e;
                time += s;
                rows.push(RunRow {
                    step: k,
                    time,
                    energy,
                    fidelity: fidelity(&psi)?,
                    qite_calls: 0,
                    two_qubit_gates: 0,
                    rotations: 0,
                });
            }
            stop = reason;
            final_state = psi;
        }
    }
    Ok(RunResult { config: config.clone(), ground_energy: spectrum.ground_energy(), rows, final_state, stop })
}

/// One double-bracket step `exp(s[ρ, H])` with `s` chosen by the policy.
/// `None` when no step lowers the energy.
fn db_step(
    h: &DenseOperator,
    norm: f64,
    psi: &StateVector,
    energy: f64,
    config: &ExperimentConfig,
) -> Result<Option<(f64, StateVector, f64)>> {
    let try_s = |s: f64| -> Result<(StateVector, f64)> {
        let next = db_qite_step(h, psi, s)?;
        let e = expectation(&next, h)?;
        Ok((next, e))
    };
    let accept = |s: f64, (next, e): (StateVector, f64)| if e < energy { Some((s, next, e)) } else { None };
    match config.policy {
        StepPolicy::Fixed => Ok(accept(config.dtau, try_s(config.dtau)?)),
        StepPolicy::VarianceBound => {
            let s = variance_bound_with_norm(h, norm, psi)?;
            if s <= 0.0 {
                return Ok(None);
            }
            Ok(accept(s, try_s(s)?))
        }
        StepPolicy::GridLineSearch => {
            let mut best: Option<(f64, StateVector, f64)> = None;
            let mut l = 1;
            loop {
                let s = l as f64 * config.dtau;
                let (next, e) = try_s(s)?;
                if e >= best.as_ref().map_or(energy, |b| b.2) {
                    return Ok(best);
                }
                best = Some((s, next, e));
                l += 1;
            }
        }
        StepPolicy::Newton => {
            // exp(s[ρ, H]) = exp(-isA) with A = i[ρ, H].
            let a = DenseOperator::hermitian(double_bracket_generator(h, psi)?.into_matrix() * C64::new(0.0, 1.0))?;
            let (e1, e2) = energy_derivatives(&a, h, psi)?;
            let mut s = newton_step(e1, e2, config.dtau);
            if s.is_nan() || s <= 0.0 {
                return Ok(None);
            }
            for _ in 0..=MAX_BACKTRACK {
                if let Some(step) = accept(s, try_s(s)?) {
                    return Ok(Some(step));
                }
                s /= 2.0;
            }
            Ok(None)
        }
    }
}
