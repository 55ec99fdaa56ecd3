//! Experiment driver: configuration, single runs, parameter sweeps, gate
//! counts and plot scripts. Everything here is deterministic for a fixed
//! configuration and seed.

mod compare;
mod config;
mod gates;
mod plot;
mod run;
mod sweep;

pub use compare::{compare_qite_acq, Comparison, MethodCost, COMPARE_COLUMNS, MATCH_BAND};
pub use config::{ExperimentConfig, InitialState, Method};
pub use gates::{gate_count, GateCount, PRUNE};
pub use plot::{write_plot_script, PlotKind};
pub use run::{matched_rows, run_experiment, simulate, RunResult, RunRow, CSV_VERSION, RUN_COLUMNS};
pub use sweep::{
    distance_sweep, fidelity_sweep, write_distance_csv, write_fidelity_csv, DistanceOptions, DistanceRow,
    FidelityRow, DISTANCE_COLUMNS, DISTANCE_MAX_QUBITS, FIDELITY_COLUMNS,
};
