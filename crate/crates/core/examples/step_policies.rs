//! ACQ with each step-size policy on the same chain.

use acq::acq::{acq_run, AcqOptions, StepPolicy};
use acq::hamiltonian::{build_tfim, Boundary};
use acq::qite::QiteProblem;
use acq::statespace::StateVector;

fn main() -> acq::error::Result<()> {
    let n = 6;
    let model = build_tfim(n, 0.5, 1.0, Boundary::Open)?;
    let spectrum = model.exact_spectrum()?;
    let problem = QiteProblem::from_model(&model, 4)?;
    let psi0 = StateVector::all_zero(n)?;

    for policy in [StepPolicy::Fixed, StepPolicy::GridLineSearch, StepPolicy::Newton, StepPolicy::VarianceBound] {
        let run = acq_run(&problem, &psi0, &AcqOptions::new(0.1, policy))?;
        let fid = spectrum.ground_fidelity(run.final_state(&psi0))?;
        println!(
            "{policy:?}: {} steps, {} QITE calls, energy {:.8}, fidelity {fid:.6}, stop {:?}",
            run.records.len(),
            run.qite_calls,
            run.final_energy(),
            run.stop
        );
    }
    Ok(())
}
