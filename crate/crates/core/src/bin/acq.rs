//! Command-line driver for runs, sweeps and gate comparisons.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use acq::acq::StepPolicy;
use acq::hamiltonian::Boundary;
use acq::harness::{
    compare_qite_acq, distance_sweep, fidelity_sweep, run_experiment, write_distance_csv, write_fidelity_csv,
    write_plot_script, DistanceOptions, ExperimentConfig, InitialState, Method, PlotKind, MATCH_BAND,
};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "acq", version, about = "Imaginary-time evolution, QITE and compressed QITE on spin chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one method and emit the per-step CSV.
    Run(RunArgs),
    /// Maximum ground fidelity over chain lengths, domain sizes and methods.
    SweepFidelity(FidelityArgs),
    /// Distance between the ITE trajectory and the geodesic to the ground state.
    SweepDistance(DistanceArgs),
    /// QITE calls and gate counts of QITE and ACQ at matched fidelity.
    Gates(GatesArgs),
}

/// Overrides applied on top of `--config` (or the defaults).
#[derive(Args, Clone, Default)]
struct ConfigArgs {
    /// Config file: `key = value` lines, or JSON when the name ends in `.json`.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    coupling: Option<f64>,
    #[arg(long)]
    field: Option<f64>,
    #[arg(long)]
    boundary: Option<Boundary>,
    /// ite | qite | acq | dbqite
    #[arg(long)]
    method: Option<Method>,
    #[arg(long)]
    domain: Option<usize>,
    #[arg(long)]
    dtau: Option<f64>,
    /// fixed | grid_line_search | newton | variance_bound
    #[arg(long)]
    policy: Option<StepPolicy>,
    #[arg(long)]
    max_steps: Option<usize>,
    /// Golden-section refinement of the ACQ line search.
    #[arg(long)]
    refine: bool,
    /// all_zero | all_plus | random
    #[arg(long)]
    initial_state: Option<InitialState>,
    #[arg(long)]
    seed: Option<u64>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => {
                ExperimentConfig::load(path).with_context(|| format!("reading config {}", path.display()))?
            }
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = &self.$f { c.$f = v.clone(); })* };
        }
        set!(n, coupling, field, boundary, method, domain, dtau, policy, max_steps, initial_state, seed);
        c.refine |= self.refine;
        c.validate()?;
        Ok(c)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Output directory for the CSV and plot script; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FidelityArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
    n_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "2,4")]
    domains: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "qite,acq")]
    methods: Vec<Method>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DistanceArgs {
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6")]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 0.5)]
    coupling: f64,
    #[arg(long, default_value_t = 1.0)]
    field: f64,
    #[arg(long, default_value = "open")]
    boundary: Boundary,
    #[arg(long, default_value = "all_zero")]
    initial_state: InitialState,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 201)]
    quadrature_points: usize,
    /// ITE length shared by every chain; defaults to the slowest convergence time.
    #[arg(long)]
    tau_max: Option<f64>,
    /// Ground infidelity that defines convergence.
    #[arg(long, default_value_t = 1e-6)]
    infidelity: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GatesArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Fidelity band below the lower final fidelity used as the common target.
    #[arg(long, default_value_t = MATCH_BAND)]
    band: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Write `csv` to `dir/name` plus the plot script, or to stdout without a directory.
fn emit(out: Option<&Path>, name: &str, plot: Option<PlotKind>, csv: &[u8]) -> Result<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(name);
            std::fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {}", path.display());
            if let Some(kind) = plot {
                eprintln!("wrote {}", write_plot_script(dir, kind)?.display());
            }
        }
        None => std::io::stdout().write_all(csv)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(a) => {
            let config = a.config.resolve()?;
            let result = run_experiment(&config)?;
            emit(a.out.as_deref(), &result.file_name(), Some(PlotKind::Run), result.to_csv().as_bytes())?;
            eprintln!(
                "{} steps, final energy {:.10}, ground energy {:.10}, fidelity {:.6}, stop {}",
                result.steps(),
                result.final_row().energy,
                result.ground_energy,
                result.final_fidelity(),
                result.stop
            );
        }
        Command::SweepFidelity(a) => {
            let base = a.config.resolve()?;
            let rows = fidelity_sweep(&a.n_list, &a.domains, &a.methods, &base)?;
            let mut buf = Vec::new();
            write_fidelity_csv(&rows, &base, &mut buf)?;
            emit(a.out.as_deref(), "fidelity_sweep.csv", Some(PlotKind::FidelitySweep), &buf)?;
        }
        Command::SweepDistance(a) => {
            let options = DistanceOptions {
                coupling: a.coupling,
                field: a.field,
                boundary: a.boundary,
                initial_state: a.initial_state,
                seed: a.seed,
                quadrature_points: a.quadrature_points,
                tau_max: a.tau_max,
                infidelity: a.infidelity,
            };
            let rows = distance_sweep(&a.n_list, &options)?;
            let mut buf = Vec::new();
            write_distance_csv(&rows, &options, &mut buf)?;
            emit(a.out.as_deref(), "distance_sweep.csv", Some(PlotKind::DistanceSweep), &buf)?;
        }
        Command::Gates(a) => {
            let config = a.config.resolve()?;
            let cmp = compare_qite_acq(&config, a.band)?;
            let mut buf = Vec::new();
            cmp.write_csv(&mut buf)?;
            let name = format!("gates_n{}_D{}.csv", config.n, config.effective_domain());
            emit(a.out.as_deref(), &name, None, &buf)?;
            eprintln!(
                "target fidelity {:.6}: qite {} calls / {} two-qubit gates, acq {} calls / {} two-qubit gates",
                cmp.target,
                cmp.qite.matched.qite_calls,
                cmp.qite.matched.two_qubit_gates,
                cmp.acq.matched.qite_calls,
                cmp.acq.matched.two_qubit_gates
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
