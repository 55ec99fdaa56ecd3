//! Exact imaginary-time evolution of a transverse-field Ising chain.

use acq::evolution::ImaginaryTimePropagator;
use acq::hamiltonian::{build_tfim, Boundary};
use acq::statespace::{expectation, StateVector};

fn main() -> acq::error::Result<()> {
    let model = build_tfim(6, 0.5, 1.0, Boundary::Open)?;
    let spectrum = model.exact_spectrum()?;
    let h = model.hamiltonian();
    let prop = ImaginaryTimePropagator::new(&h)?;
    let psi0 = StateVector::all_zero(6)?;

    println!("E0 = {:.10}, gap = {:.6}", spectrum.ground_energy(), spectrum.gap);
    println!("{:>6} {:>14} {:>12}", "tau", "energy", "fidelity");
    for k in 0..=10 {
        let tau = 0.5 * k as f64;
        let psi = prop.evolve(&psi0, tau)?;
        println!("{tau:>6.2} {:>14.10} {:>12.8}", expectation(&psi, &h)?, spectrum.ground_fidelity(&psi)?);
    }
    let tau = prop.convergence_time(&psi0, 1e-6, 1e-9)?;
    println!("ground infidelity 1e-6 reached at tau = {tau:.4}");
    Ok(())
}
