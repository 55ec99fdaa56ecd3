//! Fubini-Study geodesics and the closed-form double-bracket step times.

use acq::evolution::{db_qite_step, energy_moments};
use acq::geometry::{fs_distance, geodesic_point, rank2_geodesic_time, suzuki_shift_time};
use acq::hamiltonian::{build_tfim, Boundary};
use acq::statespace::{overlap_fidelity, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> acq::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = StateVector::random(3, &mut rng)?;
    let b = StateVector::random(3, &mut rng)?;
    let delta = fs_distance(&a, &b)?;
    println!("d(a, b) = {delta:.6}");
    for gamma in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let p = geodesic_point(&a, &b, gamma)?;
        println!("  gamma={gamma:.2}: d(p, b) = {:.6}, (1-gamma) d = {:.6}", fs_distance(&p, &b)?, (1.0 - gamma) * delta);
    }

    // One qubit: a single double-bracket step lands on the ground state.
    let model = build_tfim(1, 0.0, 1.0, Boundary::Open)?;
    let h = model.hamiltonian();
    let ground = model.exact_spectrum()?.ground_state;
    let psi = StateVector::random(1, &mut rng)?;
    let s = rank2_geodesic_time(&psi, &h)?;
    println!("rank-2 step s = {s:.6}, fidelity after = {:.12}", overlap_fidelity(&db_qite_step(&h, &psi, s)?, &ground)?);

    // Larger register: the step onto the ray of (H - alpha) psi. With alpha
    // above the spectrum this favours low energies.
    let h = build_tfim(4, 0.5, 1.0, Boundary::Open)?.hamiltonian();
    let psi = StateVector::random(4, &mut rng)?;
    let (e, v) = energy_moments(&h, &psi)?;
    let alpha = 8.0;
    let s = suzuki_shift_time(&h, alpha, &psi)?;
    let stepped = db_qite_step(&h, &psi, s)?;
    println!("E = {e:.6}, V = {v:.6}; shift alpha = {alpha}, s = {s:.6}, energy after = {:.6}", energy_moments(&h, &stepped)?.0);
    Ok(())
}
