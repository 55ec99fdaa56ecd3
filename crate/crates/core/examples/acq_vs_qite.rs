//! Cost of plain QITE and ACQ to reach the same ground fidelity.

use acq::harness::{compare_qite_acq, ExperimentConfig, MATCH_BAND};

fn main() -> acq::error::Result<()> {
    println!("{:>3} {:>3} {:>10} {:>12} {:>12} {:>14} {:>14}", "n", "D", "target", "qite calls", "acq calls", "qite 2q gates", "acq 2q gates");
    for n in [4, 6, 8] {
        for domain in [2, 4] {
            let c = compare_qite_acq(&ExperimentConfig { n, domain, ..Default::default() }, MATCH_BAND)?;
            println!(
                "{n:>3} {domain:>3} {:>10.6} {:>12} {:>12} {:>14} {:>14}",
                c.target,
                c.qite.matched.qite_calls,
                c.acq.matched.qite_calls,
                c.qite.matched.two_qubit_gates,
                c.acq.matched.two_qubit_gates
            );
        }
    }
    Ok(())
}
