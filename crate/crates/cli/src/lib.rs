//! Driver for the `cavity-zeno` binary: JSON configuration, dynamics runs
//! with CSV output, parallel parameter sweeps and figure data.

pub mod checks;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod figures;
pub mod output;
pub mod sweep;

pub use config::{RunConfig, SolverSelector, SweepSpec};
pub use dynamics::run_dynamics;
pub use error::{CliError, Result};
pub use figures::{reproduce_figure, FigureId};
pub use sweep::run_sweep;
