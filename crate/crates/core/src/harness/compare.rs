//! Side-by-side cost of QITE and ACQ on one configuration.

use std::io::Write;

use serde::Serialize;

use super::config::{ExperimentConfig, Method};
use super::run::{matched_rows, simulate, RunResult, RunRow, CSV_VERSION};
use crate::error::{invalid, Result};

/// Default fidelity band for matching two runs.
pub const MATCH_BAND: f64 = 0.01;

pub const COMPARE_COLUMNS: &str =
    "method,target_fidelity,step,qite_calls,two_qubit_gates,rotations,final_fidelity,total_steps,total_qite_calls";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MethodCost {
    pub method: Method,
    /// First row at or above the common target.
    pub matched: RunRow,
    pub final_fidelity: f64,
    pub total_steps: usize,
    pub total_qite_calls: usize,
}

impl MethodCost {
    fn new(method: Method, run: &RunResult, matched: &RunRow) -> Self {
        Self {
            method,
            matched: matched.clone(),
            final_fidelity: run.final_fidelity(),
            total_steps: run.steps(),
            total_qite_calls: run.final_row().qite_calls,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub config: ExperimentConfig,
    pub band: f64,
    /// Lower of the two final fidelities, minus the band.
    pub target: f64,
    pub qite: MethodCost,
    pub acq: MethodCost,
}

impl Comparison {
    /// ACQ reaches the target with strictly fewer QITE calls.
    pub fn acq_fewer_calls(&self) -> bool {
        self.acq.matched.qite_calls < self.qite.matched.qite_calls
    }

    pub fn acq_fewer_two_qubit_gates(&self) -> bool {
        self.acq.matched.two_qubit_gates < self.qite.matched.two_qubit_gates
    }

    pub fn final_fidelity_gap(&self) -> f64 {
        (self.acq.final_fidelity - self.qite.final_fidelity).abs()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# acq-results v{CSV_VERSION} compare")?;
        writeln!(w, "# {} band={}", self.config.summary(), self.band)?;
        writeln!(w, "{COMPARE_COLUMNS}")?;
        for c in [&self.qite, &self.acq] {
            let m = &c.matched;
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                c.method.name(),
                self.target,
                m.step,
                m.qite_calls,
                m.two_qubit_gates,
                m.rotations,
                c.final_fidelity,
                c.total_steps,
                c.total_qite_calls
            )?;
        }
        Ok(())
    }
}

/// Run plain QITE and ACQ on `config` (its `method` is ignored) and report
/// what each spent to first reach a common ground fidelity.
pub fn compare_qite_acq(config: &ExperimentConfig, band: f64) -> Result<Comparison> {
    if !(band >= 0.0 && band.is_finite()) {
        return Err(invalid(format!("band must be a non-negative number, got {band}")));
    }
    let job = |method| ExperimentConfig { method, output: None, ..config.clone() };
    let (qite, acq) = rayon::join(|| simulate(&job(Method::Qite)), || simulate(&job(Method::Acq)));
    let (qite, acq) = (qite?, acq?);
    let (target, q, a) = matched_rows(&qite, &acq, band);
    Ok(Comparison {
        config: config.clone(),
        band,
        target,
        qite: MethodCost::new(Method::Qite, &qite, q),
        acq: MethodCost::new(Method::Acq, &acq, a),
    })
}
