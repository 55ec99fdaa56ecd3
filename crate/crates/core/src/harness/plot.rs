//! Self-contained matplotlib scripts for the CSV outputs.

use std::path::{Path, PathBuf};

use crate::error::Result;

const READ_CSV: &str = r##"import csv
import sys

import matplotlib.pyplot as plt


def read_rows(path):
    with open(path) as f:
        lines = [line for line in f if not line.startswith("#")]
    return list(csv.DictReader(lines))
"##;

const RUN: &str = r##"

paths = sys.argv[1:] or ["run.csv"]
fig, (ax_e, ax_f) = plt.subplots(1, 2, figsize=(10, 4))
for path in paths:
    rows = read_rows(path)
    steps = [int(r["step"]) for r in rows]
    ax_e.plot(steps, [float(r["energy"]) for r in rows], marker=".", label=path)
    ax_f.plot(steps, [float(r["fidelity"]) for r in rows], marker=".", label=path)
ax_e.set_xlabel("step")
ax_e.set_ylabel("energy")
ax_f.set_xlabel("step")
ax_f.set_ylabel("ground fidelity")
ax_f.legend(fontsize="small")
fig.tight_layout()
fig.savefig("run.png", dpi=150)
"##;

const FIDELITY: &str = r##"

rows = read_rows(sys.argv[1] if len(sys.argv) > 1 else "fidelity_sweep.csv")
fig, ax = plt.subplots(figsize=(6, 4))
series = sorted({(r["method"], int(r["domain"])) for r in rows})
for method, domain in series:
    sel = [r for r in rows if r["method"] == method and int(r["domain"]) == domain]
    sel.sort(key=lambda r: int(r["n"]))
    ax.plot([int(r["n"]) for r in sel], [float(r["max_fidelity"]) for r in sel],
            marker="o", label=f"{method} D={domain}")
ax.set_xlabel("N")
ax.set_ylabel("max ground fidelity")
ax.legend()
fig.tight_layout()
fig.savefig("fidelity_sweep.png", dpi=150)
"##;

const DISTANCE: &str = r##"

rows = read_rows(sys.argv[1] if len(sys.argv) > 1 else "distance_sweep.csv")
rows.sort(key=lambda r: int(r["n"]))
fig, ax = plt.subplots(figsize=(6, 4))
ax.plot([int(r["n"]) for r in rows], [float(r["distance"]) for r in rows], marker="o")
ax.set_xlabel("N")
ax.set_ylabel("trajectory distance (ITE vs geodesic)")
fig.tight_layout()
fig.savefig("distance_sweep.png", dpi=150)
"##;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    Run,
    FidelitySweep,
    DistanceSweep,
}

impl PlotKind {
    pub fn file_name(self) -> &'static str {
        match self {
            PlotKind::Run => "plot_run.py",
            PlotKind::FidelitySweep => "plot_fidelity_sweep.py",
            PlotKind::DistanceSweep => "plot_distance_sweep.py",
        }
    }

    pub fn script(self) -> String {
        let body = match self {
            PlotKind::Run => RUN,
            PlotKind::FidelitySweep => FIDELITY,
            PlotKind::DistanceSweep => DISTANCE,
        };
        format!("{READ_CSV}{body}")
    }
}

/// Write the plotting script for `kind` into `dir`.
pub fn write_plot_script(dir: &Path, kind: PlotKind) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(kind.file_name());
    std::fs::write(&path, kind.script())?;
    Ok(path)
}
