//! QITE with truncated and full generator windows.

use acq::hamiltonian::{build_tfim, Boundary};
use acq::qite::{qite_run, QiteProblem};
use acq::statespace::StateVector;

fn main() -> acq::error::Result<()> {
    let n = 6;
    let model = build_tfim(n, 0.5, 1.0, Boundary::Open)?;
    let spectrum = model.exact_spectrum()?;
    let psi0 = StateVector::all_zero(n)?;

    for domain in [2, 3, 4] {
        let problem = QiteProblem::from_model(&model, domain)?;
        let steps = qite_run(&problem, &psi0, 0.1, 300, true)?;
        let best = steps.iter().map(|s| spectrum.ground_fidelity(&s.state).unwrap()).fold(0.0, f64::max);
        let last = steps.last().expect("at least one descending sweep");
        println!(
            "D={domain}: {} sweeps, energy {:.8} (exact {:.8}), max fidelity {best:.6}",
            steps.len(),
            last.energy,
            spectrum.ground_energy()
        );
    }
    Ok(())
}
