use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};

/// Which route produced a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Analytic,
    Volterra,
    Pseudomode,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Analytic, Scheme::Volterra, Scheme::Pseudomode];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Analytic => "analytic",
            Scheme::Volterra => "volterra",
            Scheme::Pseudomode => "pseudomode",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Uniform grid `t_i = i h`, `i = 0..=n`, with `n h = t_end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverGrid {
    t_end: f64,
    step: f64,
    steps: usize,
    scheme: Scheme,
}

impl SolverGrid {
    /// Default horizon in units of `1/W`.
    pub const DEFAULT_T_END: f64 = 10.0;
    pub const DEFAULT_STEP: f64 = 1e-3;

    pub fn new(t_end: f64, step: f64, scheme: Scheme) -> Result<Self> {
        ensure_positive("h", step)?;
        ensure_positive("t_end", t_end)?;
        if t_end < step {
            return Err(Error::InvalidGrid(format!("t_end = {t_end} is shorter than h = {step}")));
        }
        let ratio = t_end / step;
        let steps = ratio.round();
        if (ratio - steps).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "t_end / h = {ratio} is not an integer"
            )));
        }
        Ok(Self {
            t_end,
            step,
            steps: steps as usize,
            scheme,
        })
    }

    pub fn default_for(scheme: Scheme) -> Self {
        Self::new(Self::DEFAULT_T_END, Self::DEFAULT_STEP, scheme).expect("default grid is valid")
    }

    pub fn with_scheme(self, scheme: Scheme) -> Self {
        Self { scheme, ..self }
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Number of steps; the grid holds `steps() + 1` points.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|i| i as f64 * self.step).collect()
    }
}
