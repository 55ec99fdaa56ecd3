//! Drive a run from a flat config and write the CSV plus plot script.

use acq::harness::{run_experiment, write_plot_script, ExperimentConfig, PlotKind};

const CONFIG: &str = "
n = 5
method = acq
domain = 3
dtau = 0.1
policy = newton
initial_state = random
seed = 3
";

fn main() -> acq::error::Result<()> {
    let mut config = ExperimentConfig::from_key_values(CONFIG)?;
    let dir = std::env::temp_dir().join("acq_config_run");
    config.output = Some(dir.clone());
    let result = run_experiment(&config)?;
    write_plot_script(&dir, PlotKind::Run)?;
    println!("{}", config.summary());
    println!("{} steps, final fidelity {:.6}, stop {}", result.steps(), result.final_fidelity(), result.stop);
    println!("wrote {}", dir.join(result.file_name()).display());
    Ok(())
}
