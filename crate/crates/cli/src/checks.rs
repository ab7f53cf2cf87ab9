use std::fmt;

use cavity_zeno::{
    analytic_solve, compare_series, heuristic_rate, pseudomode_solve, volterra_solve, CouplingConfig,
    InitialAmplitudes, LorentzianSpectrum, RateReport, Scheme, SolverGrid,
};
use serde::Serialize;

use crate::error::Result;

/// Figure parameter sets plus three strong-coupling sets, `W = 1`.
pub const SELFTEST_SETS: [(f64, f64); 9] = [
    (5.0, 0.0),
    (8.0, 0.0),
    (10.0, 0.0),
    (5.0, 20.0),
    (8.0, 20.0),
    (10.0, 20.0),
    (1.0, 0.0),
    (1.0, 5.0),
    (1.0, 20.0),
];
pub const PSEUDOMODE_TOLERANCE: f64 = 1e-6;
pub const VOLTERRA_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, Serialize)]
pub struct SelftestLine {
    pub half_width: f64,
    pub detuning: f64,
    pub pseudomode_deviation: f64,
    pub volterra_deviation: f64,
}

impl SelftestLine {
    pub fn pass(&self) -> bool {
        self.pseudomode_deviation < PSEUDOMODE_TOLERANCE && self.volterra_deviation < VOLTERRA_TOLERANCE
    }
}

impl fmt::Display for SelftestLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] lambda={} delta={}: pseudomode {:.2e} (< {:.0e}), volterra {:.2e} (< {:.0e})",
            if self.pass() { "PASS" } else { "FAIL" },
            self.half_width,
            self.detuning,
            self.pseudomode_deviation,
            PSEUDOMODE_TOLERANCE,
            self.volterra_deviation,
            VOLTERRA_TOLERANCE
        )
    }
}

/// Sup-norm deviation of both oracles from the closed form on `[0, 10]`,
/// `h = 1e-3`, `phi_+`, `r1 = r2`.
pub fn selftest() -> Result<Vec<SelftestLine>> {
    let grid = SolverGrid::new(10.0, 1e-3, Scheme::Analytic)?;
    let coupling = CouplingConfig::symmetric();
    let init = InitialAmplitudes::phi_plus();
    let mut lines = Vec::new();
    for (half_width, detuning) in SELFTEST_SETS {
        let spec = LorentzianSpectrum::with_detuning(1.0, half_width, detuning)?;
        let exact = analytic_solve(&spec, &coupling, &init, &grid)?;
        lines.push(SelftestLine {
            half_width,
            detuning,
            pseudomode_deviation: compare_series(&exact, &pseudomode_solve(&spec, &coupling, &init, &grid)?)?,
            volterra_deviation: compare_series(&exact, &volterra_solve(&spec, &coupling, &init, &grid)?)?,
        });
    }
    Ok(lines)
}

#[derive(Debug, Clone, Serialize)]
pub struct ZenoRate {
    pub report: RateReport,
    pub heuristic_rate: f64,
}

impl ZenoRate {
    pub fn new(spectrum: &LorentzianSpectrum, t: f64) -> Result<Self> {
        Ok(ZenoRate {
            report: RateReport::new(spectrum, t)?,
            heuristic_rate: heuristic_rate(spectrum.transition_strength(), spectrum.half_width()),
        })
    }
}

impl fmt::Display for ZenoRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.report;
        writeln!(f, "gamma_eff(t={}) = {:.12e}", r.time, r.gamma_eff)?;
        writeln!(f, "gamma_asym = {:.12e}", r.gamma_asym)?;
        writeln!(f, "regime = {}", r.regime.name())?;
        write!(f, "heuristic_rate = {:.12e}", self.heuristic_rate)
    }
}
