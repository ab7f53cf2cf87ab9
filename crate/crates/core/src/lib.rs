//! Entanglement dynamics of two two-level atoms sharing a lossy cavity with a
//! Lorentzian spectral density.
//!
//! The crate provides:
//! * [`model`]: spectrum, couplings, states, time series and the reduced
//!   two-atom density matrix;
//! * [`analytic`]: the exact Laplace-transform solution and concurrence;
//! * [`oracle`]: two independent numerical solutions (product-integration of the
//!   integro-differential equations and an RK4 pseudomode ODE);
//! * [`zeno`]: first-order decay rates, Zeno/anti-Zeno classification and
//!   rate/half-time extraction from series.

// `!(x <= y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod grid;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod zeno;

pub use analytic::{
    amplitudes, analytic_solve, characteristic_roots, concurrence, epsilon, reduced_density_matrix,
    survival_probability, wootters_concurrence, AnalyticSolution, CharacteristicRoots,
};
pub use error::{Error, Result};
pub use grid::{Scheme, SolverGrid};
pub use model::{
    correlation_kernel, project_initial, spectral_density, AmplitudeSeries, CouplingConfig,
    DensityMatrix4, InitialAmplitudes, LorentzianSpectrum, ProjectionPair,
};
pub use oracle::{
    compare_series, pseudomode_solve, pseudomode_states, solve, volterra_solve, PseudomodeState,
    PseudomodeSystem,
};
pub use zeno::{
    asymptotic_rate, classify_regime, effective_rate, filter_function, fit_rate, half_time,
    heuristic_rate, RateReport, Regime,
};

pub use num_complex::Complex64;
