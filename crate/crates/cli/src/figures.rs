//! Data and plot scripts for the concurrence and spectrum figures.

use std::fmt;
use std::path::{Path, PathBuf};

use cavity_zeno::{analytic_solve, CouplingConfig, InitialAmplitudes, LorentzianSpectrum, Scheme, SolverGrid};

use crate::error::Result;
use crate::output::{ensure_dir, table_csv, write_file};

pub const HALF_WIDTHS: [f64; 3] = [5.0, 8.0, 10.0];
pub const FIGURE_T_END: f64 = 10.0;
pub const FIGURE_STEP: f64 = 1e-2;
pub const SPECTRUM_REACH: f64 = 30.0;
pub const SPECTRUM_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    Fig1a,
    Fig1b,
    Fig2,
}

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1a => "fig1a",
            FigureId::Fig1b => "fig1b",
            FigureId::Fig2 => "fig2",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn curve_names(first: &str) -> Vec<String> {
    std::iter::once(first.to_string())
        .chain(HALF_WIDTHS.iter().map(|l| format!("lambda_{l}")))
        .collect()
}

/// `C(t)` for `phi_+`, `W = 1`, `r1 = r2` at each half-width.
pub fn concurrence_figure(detuning: f64) -> Result<FigureData> {
    let grid = SolverGrid::new(FIGURE_T_END, FIGURE_STEP, Scheme::Analytic)?;
    let mut columns = Vec::new();
    for lambda in HALF_WIDTHS {
        let spec = LorentzianSpectrum::with_detuning(1.0, lambda, detuning)?;
        let s = analytic_solve(&spec, &CouplingConfig::symmetric(), &InitialAmplitudes::phi_plus(), &grid)?;
        columns.push(s.concurrence().to_vec());
    }
    let rows = grid
        .times()
        .iter()
        .enumerate()
        .map(|(i, &t)| std::iter::once(t).chain(columns.iter().map(|c| c[i])).collect())
        .collect();
    Ok(FigureData {
        header: curve_names("t"),
        rows,
    })
}

/// `J` against the offset from the cavity center, `W = 1`.
pub fn spectrum_figure() -> Result<FigureData> {
    let n = (2.0 * SPECTRUM_REACH / SPECTRUM_STEP).round() as usize;
    let spectra = HALF_WIDTHS
        .iter()
        .map(|&l| LorentzianSpectrum::with_detuning(1.0, l, 0.0))
        .collect::<cavity_zeno::Result<Vec<_>>>()?;
    let rows = (0..=n)
        .map(|i| {
            let d = -SPECTRUM_REACH + SPECTRUM_STEP * i as f64;
            std::iter::once(d).chain(spectra.iter().map(|s| s.density(d))).collect()
        })
        .collect();
    Ok(FigureData {
        header: curve_names("offset"),
        rows,
    })
}

pub fn figure_data(id: FigureId) -> Result<FigureData> {
    match id {
        FigureId::Fig1a => concurrence_figure(0.0),
        FigureId::Fig1b => concurrence_figure(20.0),
        FigureId::Fig2 => spectrum_figure(),
    }
}

fn plot_script(id: FigureId) -> String {
    let (xlabel, ylabel, title) = match id {
        FigureId::Fig1a => ("t (1/W)", "C(t)", "Concurrence, delta = 0"),
        FigureId::Fig1b => ("t (1/W)", "C(t)", "Concurrence, delta = 20"),
        FigureId::Fig2 => ("omega - omega_c (W)", "J", "Cavity spectrum"),
    };
    let name = id.name();
    format!(
        r#"import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "{name}.csv"), newline="") as f:
    rows = list(csv.reader(f))
header = rows[0]
data = [[float(x) for x in row] for row in rows[1:]]
x = [row[0] for row in data]

fig, ax = plt.subplots(figsize=(6, 4))
for j, label in enumerate(header[1:], start=1):
    ax.plot(x, [row[j] for row in data], label=label.replace("lambda_", "lambda = "))
ax.set_xlabel("{xlabel}")
ax.set_ylabel("{ylabel}")
ax.set_title("{title}")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "{name}.png"), dpi=150)
"#
    )
}

/// Writes `<id>.csv` and `<id>.py` into `out_dir`.
pub fn reproduce_figure(id: FigureId, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let data = figure_data(id)?;
    ensure_dir(out_dir)?;
    let csv = out_dir.join(format!("{}.csv", id.name()));
    write_file(&csv, &table_csv(&data.header, &data.rows))?;
    let script = out_dir.join(format!("{}.py", id.name()));
    write_file(&script, &plot_script(id))?;
    Ok(vec![csv, script])
}
