//! Independent numerical solutions of the same dynamics, used to check the
//! closed-form solver.

mod pseudomode;
mod volterra;

pub use pseudomode::{
    pseudomode_solve, pseudomode_states, PseudomodeState, PseudomodeSystem,
    MAX_STIFFNESS as PSEUDOMODE_MAX_STIFFNESS,
};
pub use volterra::{volterra_solve, MAX_STIFFNESS as VOLTERRA_MAX_STIFFNESS};

use crate::analytic::analytic_solve;
use crate::error::{Error, Result};
use crate::grid::{Scheme, SolverGrid};
use crate::model::{AmplitudeSeries, CouplingConfig, InitialAmplitudes, LorentzianSpectrum};

/// Runs the route named by `grid.scheme()`.
pub fn solve(
    spectrum: &LorentzianSpectrum,
    coupling: &CouplingConfig,
    init: &InitialAmplitudes,
    grid: &SolverGrid,
) -> Result<AmplitudeSeries> {
    match grid.scheme() {
        Scheme::Analytic => analytic_solve(spectrum, coupling, init, grid),
        Scheme::Volterra => volterra_solve(spectrum, coupling, init, grid),
        Scheme::Pseudomode => pseudomode_solve(spectrum, coupling, init, grid),
    }
}

/// Sup-norm distance `max_i max(|c1a - c1b|, |c2a - c2b|)` between two series
/// on the same grid.
pub fn compare_series(a: &AmplitudeSeries, b: &AmplitudeSeries) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!("{} vs {} points", a.len(), b.len())));
    }
    if let Some((ta, tb)) = a
        .times()
        .iter()
        .zip(b.times())
        .find(|(ta, tb)| (*ta - *tb).abs() > 1e-12 * ta.abs().max(1.0))
    {
        return Err(Error::GridMismatch(format!("time {ta} vs {tb}")));
    }
    let dev = a
        .c1()
        .iter()
        .zip(b.c1())
        .zip(a.c2().iter().zip(b.c2()))
        .map(|((x1, y1), (x2, y2))| (x1 - y1).norm().max((x2 - y2).norm()))
        .fold(0.0, f64::max);
    Ok(dev)
}
