//! How far the ITE path strays from the straight geodesic, as the chain grows.

use acq::harness::{distance_sweep, DistanceOptions};

fn main() -> acq::error::Result<()> {
    let rows = distance_sweep(&[1, 2, 3, 4, 5, 6, 7, 8], &DistanceOptions::default())?;
    println!("shared tau_max = {:.4}", rows[0].tau_max);
    println!("{:>3} {:>10} {:>12} {:>14}", "n", "gap", "distance", "shared-param");
    for r in rows {
        println!("{:>3} {:>10.6} {:>12.6} {:>14.6}", r.n, r.gap, r.distance, r.shared_parameter_bound);
    }
    Ok(())
}
