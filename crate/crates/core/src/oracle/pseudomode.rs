//! Pseudomode picture: the Lorentzian continuum is replaced by one discrete
//! damped cavity quasimode coupled at strength `W` to the atoms and at a flat
//! rate to a Markovian continuum. In the single-excitation sector the
//! continuum is traced out exactly, leaving
//!
//! ```text
//! d beta_+/dt = -i Omega_R b
//! d b/dt      = -i Omega_R beta_+ - (lambda + i delta) b
//! ```
//!
//! which is integrated with classic fixed-step RK4.

use num_complex::Complex64;

use crate::analytic::characteristic_roots;
use crate::error::{ensure_finite, ensure_positive, invalid, Error, Result};
use crate::grid::SolverGrid;
use crate::model::{
    project_initial, AmplitudeSeries, CouplingConfig, InitialAmplitudes, LorentzianSpectrum,
};

/// Upper bound on `h |s_max|`.
pub const MAX_STIFFNESS: f64 = 1.0;

/// Amplitudes in the atoms-plus-quasimode picture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudomodeState {
    pub superradiant: Complex64,
    pub quasimode: Complex64,
    pub subradiant: Complex64,
}

impl PseudomodeState {
    /// Total excitation left in atoms and quasimode.
    pub fn excitation(&self) -> f64 {
        self.superradiant.norm_sqr() + self.quasimode.norm_sqr() + self.subradiant.norm_sqr()
    }
}

/// The two-amplitude linear system for `(beta_+, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudomodeSystem {
    rabi: f64,
    kappa: Complex64,
}

impl PseudomodeSystem {
    /// `rabi = 0` is allowed here and decouples the atoms.
    pub fn new(rabi: f64, half_width: f64, detuning: f64) -> Result<Self> {
        ensure_finite("rabi_frequency", rabi)?;
        if rabi < 0.0 {
            return Err(invalid("rabi_frequency", format!("must be non-negative (got {rabi})")));
        }
        ensure_positive("half_width", half_width)?;
        ensure_finite("detuning", detuning)?;
        Ok(Self {
            rabi,
            kappa: Complex64::new(half_width, detuning),
        })
    }

    /// Largest eigenvalue magnitude of the generator.
    pub fn spectral_radius(&self) -> f64 {
        if self.rabi == 0.0 {
            return self.kappa.norm();
        }
        characteristic_roots(self.rabi, self.kappa.re, self.kappa.im)
            .map(|r| r.max_magnitude())
            .unwrap_or_else(|_| self.kappa.norm())
    }

    fn derivative(&self, beta: Complex64, b: Complex64) -> (Complex64, Complex64) {
        let i_rabi = Complex64::new(0.0, self.rabi);
        (-i_rabi * b, -i_rabi * beta - self.kappa * b)
    }

    fn rk4_step(&self, beta: Complex64, b: Complex64, h: f64) -> (Complex64, Complex64) {
        let (k1a, k1b) = self.derivative(beta, b);
        let (k2a, k2b) = self.derivative(beta + 0.5 * h * k1a, b + 0.5 * h * k1b);
        let (k3a, k3b) = self.derivative(beta + 0.5 * h * k2a, b + 0.5 * h * k2b);
        let (k4a, k4b) = self.derivative(beta + h * k3a, b + h * k3b);
        (
            beta + h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a),
            b + h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b),
        )
    }

    /// Integrates from `(beta0, b = 0)` over `steps` steps of size `h`,
    /// returning `steps + 1` states.
    pub fn trajectory(
        &self,
        beta0: Complex64,
        subradiant: Complex64,
        h: f64,
        steps: usize,
    ) -> Result<Vec<PseudomodeState>> {
        let stiffness = h * self.spectral_radius();
        if stiffness > MAX_STIFFNESS {
            return Err(Error::StepTooLarge {
                scheme: "pseudomode",
                step: h,
                product: stiffness,
                limit: MAX_STIFFNESS,
            });
        }
        let mut out = Vec::with_capacity(steps + 1);
        let (mut beta, mut b) = (beta0, Complex64::new(0.0, 0.0));
        out.push(PseudomodeState {
            superradiant: beta,
            quasimode: b,
            subradiant,
        });
        for _ in 0..steps {
            (beta, b) = self.rk4_step(beta, b, h);
            out.push(PseudomodeState {
                superradiant: beta,
                quasimode: b,
                subradiant,
            });
        }
        Ok(out)
    }
}

/// Pseudomode trajectory for the given physical parameters.
pub fn pseudomode_states(
    spectrum: &LorentzianSpectrum,
    coupling: &CouplingConfig,
    init: &InitialAmplitudes,
    grid: &SolverGrid,
) -> Result<Vec<PseudomodeState>> {
    let rabi = coupling.rabi_frequency(spectrum.transition_strength());
    let system = PseudomodeSystem::new(rabi, spectrum.half_width(), spectrum.detuning())?;
    let proj = project_initial(coupling, init);
    system.trajectory(proj.plus, proj.minus, grid.step(), grid.steps())
}

pub fn pseudomode_solve(
    spectrum: &LorentzianSpectrum,
    coupling: &CouplingConfig,
    init: &InitialAmplitudes,
    grid: &SolverGrid,
) -> Result<AmplitudeSeries> {
    let states = pseudomode_states(spectrum, coupling, init, grid)?;
    let (r1, r2) = (coupling.r1(), coupling.r2());
    let (c1, c2) = states
        .iter()
        .map(|s| {
            (
                r2 * s.subradiant + r1 * s.superradiant,
                -r1 * s.subradiant + r2 * s.superradiant,
            )
        })
        .unzip();
    AmplitudeSeries::new(grid.times(), c1, c2)
}
