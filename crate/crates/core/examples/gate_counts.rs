//! Circuit cost of one QITE sweep, compiled term by term or merged.

use acq::hamiltonian::{build_tfim, Boundary};
use acq::harness::gate_count;
use acq::qite::QiteProblem;
use acq::statespace::StateVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> acq::error::Result<()> {
    let n = 6;
    let model = build_tfim(n, 0.5, 1.0, Boundary::Open)?;
    let psi = StateVector::random(n, &mut ChaCha8Rng::seed_from_u64(5))?;
    for domain in [2, 3, 4] {
        let generators = QiteProblem::from_model(&model, domain)?.generators(&psi, 0.1)?;
        let plain = gate_count(&generators, false);
        let merged = gate_count(&generators, true);
        println!(
            "D={domain}: {} generators; per term {} two-qubit / {} rotations; merged {} / {}",
            generators.len(),
            plain.two_qubit,
            plain.rotations,
            merged.two_qubit,
            merged.rotations
        );
    }
    Ok(())
}
