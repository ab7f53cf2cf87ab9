//! JSON run and sweep configuration. All frequencies are in units of the
//! transition strength `W` unless `W` itself is set.

use std::fmt;
use std::path::{Path, PathBuf};

use cavity_zeno::{Complex64, CouplingConfig, InitialAmplitudes, LorentzianSpectrum, Scheme, SolverGrid};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const DEFAULT_OUTPUT_DIR: &str = "output";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    #[serde(alias = "W", default = "one")]
    pub transition_strength: f64,
    #[serde(alias = "lambda")]
    pub half_width: f64,
    #[serde(alias = "delta", default)]
    pub detuning: f64,
}

fn one() -> f64 {
    1.0
}

/// Either `r1` alone (`r2 = sqrt(1 - r1^2)`) or both raw couplings.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomAmplitudes {
    /// `[re, im]`
    pub c10: [f64; 2],
    pub c20: [f64; 2],
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialStateSpec {
    #[default]
    PhiPlus,
    PsiMinus,
    Custom(CustomAmplitudes),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SolverSelector {
    #[default]
    Analytic,
    Volterra,
    Pseudomode,
    All,
}

impl SolverSelector {
    pub fn schemes(self) -> Vec<Scheme> {
        match self {
            SolverSelector::Analytic => vec![Scheme::Analytic],
            SolverSelector::Volterra => vec![Scheme::Volterra],
            SolverSelector::Pseudomode => vec![Scheme::Pseudomode],
            SolverSelector::All => Scheme::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_step")]
    pub h: f64,
}

fn default_t_end() -> f64 {
    SolverGrid::DEFAULT_T_END
}

fn default_step() -> f64 {
    SolverGrid::DEFAULT_STEP
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            t_end: default_t_end(),
            h: default_step(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub spectrum: SpectrumConfig,
    #[serde(default)]
    pub coupling: CouplingSpec,
    #[serde(default)]
    pub initial_state: InitialStateSpec,
    #[serde(default)]
    pub solver: SolverSelector,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

/// A validated run.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub spectrum: LorentzianSpectrum,
    pub coupling: CouplingConfig,
    pub initial: InitialAmplitudes,
    pub schemes: Vec<Scheme>,
    pub t_end: f64,
    pub step: f64,
}

fn field(name: &str) -> impl Fn(cavity_zeno::Error) -> CliError + '_ {
    move |e| CliError::config(format!("{name}: {e}"))
}

impl CouplingSpec {
    pub fn resolve(&self) -> Result<CouplingConfig> {
        match (self.r1, self.alpha1, self.alpha2) {
            (None, None, None) => Ok(CouplingConfig::symmetric()),
            (Some(r1), None, None) => CouplingConfig::from_relative(r1).map_err(field("coupling.r1")),
            (None, Some(a1), Some(a2)) => CouplingConfig::new(a1, a2).map_err(field("coupling")),
            _ => Err(CliError::config("coupling: give either `r1` alone or both `alpha1` and `alpha2`")),
        }
    }
}

impl InitialStateSpec {
    pub fn resolve(&self, coupling: &CouplingConfig) -> Result<InitialAmplitudes> {
        match self {
            InitialStateSpec::PhiPlus => Ok(InitialAmplitudes::phi_plus()),
            InitialStateSpec::PsiMinus => Ok(InitialAmplitudes::psi_minus(coupling)),
            InitialStateSpec::Custom(c) => InitialAmplitudes::new(
                Complex64::new(c.c10[0], c.c10[1]),
                Complex64::new(c.c20[0], c.c20[1]),
            )
            .map_err(field("initial_state.custom")),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| CliError::config(format!("{}: {}", path.display(), strip_prefix(&e))))
    }

    pub fn resolve(&self) -> Result<ResolvedRun> {
        let s = &self.spectrum;
        let spectrum = LorentzianSpectrum::with_detuning(s.transition_strength, s.half_width, s.detuning)
            .map_err(field("spectrum"))?;
        let coupling = self.coupling.resolve()?;
        let initial = self.initial_state.resolve(&coupling)?;
        // Grid divisibility and positivity are checked here; stiffness limits
        // surface later as numerical failures.
        SolverGrid::new(self.grid.t_end, self.grid.h, Scheme::Analytic).map_err(field("grid"))?;
        Ok(ResolvedRun {
            spectrum,
            coupling,
            initial,
            schemes: self.solver.schemes(),
            t_end: self.grid.t_end,
            step: self.grid.h,
        })
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
    }
}

impl ResolvedRun {
    pub fn grid(&self, scheme: Scheme) -> Result<SolverGrid> {
        Ok(SolverGrid::new(self.t_end, self.step, scheme)?)
    }
}

fn strip_prefix(e: &CliError) -> String {
    match e {
        CliError::Config(m) => m.clone(),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "lambda")]
    HalfWidth,
    #[serde(rename = "delta")]
    Detuning,
    #[serde(rename = "W")]
    TransitionStrength,
    #[serde(rename = "r1")]
    R1,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::HalfWidth => "lambda",
            SweepParameter::Detuning => "delta",
            SweepParameter::TransitionStrength => "W",
            SweepParameter::R1 => "r1",
        }
    }

    /// Copy of `base` with this parameter set to `value`.
    pub fn apply(self, base: &RunConfig, value: f64) -> RunConfig {
        let mut cfg = base.clone();
        match self {
            SweepParameter::HalfWidth => cfg.spectrum.half_width = value,
            SweepParameter::Detuning => cfg.spectrum.detuning = value,
            SweepParameter::TransitionStrength => cfg.spectrum.transition_strength = value,
            SweepParameter::R1 => {
                cfg.coupling = CouplingSpec {
                    r1: Some(value),
                    ..CouplingSpec::default()
                }
            }
        }
        cfg
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    HalfTime,
    FitRate,
    GammaAsym,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::HalfTime => "half_time",
            Metric::FitRate => "fit_rate",
            Metric::GammaAsym => "gamma_asym",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: RunConfig,
    pub parameter: SweepParameter,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<ValueRange>,
    pub metrics: Vec<Metric>,
    /// Fraction of the initial concurrence that defines `half_time`.
    #[serde(default = "default_level")]
    pub half_time_level: f64,
    /// `fit_rate` window as fractions of `t_end`.
    #[serde(default = "default_fit_window")]
    pub fit_window: [f64; 2],
}

fn default_level() -> f64 {
    0.5
}

fn default_fit_window() -> [f64; 2] {
    [0.5, 1.0]
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| CliError::config(format!("{}: {}", path.display(), strip_prefix(&e))))
    }

    /// Sweep values in ascending order.
    pub fn values(&self) -> Result<Vec<f64>> {
        let mut values = match (&self.values, &self.range) {
            (Some(v), None) => v.clone(),
            (None, Some(r)) => {
                if r.count == 0 || !r.start.is_finite() || !r.stop.is_finite() {
                    return Err(CliError::config("range: need finite start/stop and count >= 1"));
                }
                if r.count == 1 {
                    vec![r.start]
                } else {
                    let step = (r.stop - r.start) / (r.count - 1) as f64;
                    (0..r.count).map(|i| r.start + step * i as f64).collect()
                }
            }
            _ => return Err(CliError::config("sweep: give exactly one of `values` or `range`")),
        };
        if values.is_empty() {
            return Err(CliError::config("values: empty"));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(CliError::config(format!("values: non-finite entry {bad}")));
        }
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    pub fn validate(&self) -> Result<()> {
        if self.metrics.is_empty() {
            return Err(CliError::config("metrics: empty"));
        }
        if self.base.solver == SolverSelector::All {
            return Err(CliError::config("base.solver: a sweep needs a single solver, not `all`"));
        }
        if !(self.half_time_level > 0.0 && self.half_time_level < 1.0) {
            return Err(CliError::config("half_time_level: must lie in (0, 1)"));
        }
        let [a, b] = self.fit_window;
        if !(0.0 <= a && a < b && b <= 1.0) {
            return Err(CliError::config("fit_window: need 0 <= start < end <= 1"));
        }
        for v in self.values()? {
            self.parameter
                .apply(&self.base, v)
                .resolve()
                .map_err(|e| CliError::config(format!("{}={v}: {}", self.parameter, strip_prefix(&e))))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = RunConfig::from_json(r#"{"spectrum": {"lambda": 5}}"#).unwrap();
        let run = cfg.resolve().unwrap();
        assert_eq!(run.spectrum.transition_strength(), 1.0);
        assert_eq!(run.spectrum.detuning(), 0.0);
        assert_eq!(run.schemes, vec![Scheme::Analytic]);
        assert_eq!((run.t_end, run.step), (10.0, 1e-3));
        assert!((run.coupling.r1() - run.coupling.r2()).abs() < 1e-15);
        assert_eq!(cfg.output_dir(), PathBuf::from("output"));
    }

    #[test]
    fn unknown_and_invalid_fields_are_reported() {
        let e = RunConfig::from_json(r#"{"spectrum": {"lambda": 5, "gamma": 1}}"#).unwrap_err();
        assert!(e.to_string().contains("gamma"), "{e}");
        let e = RunConfig::from_json(r#"{"spectrum": {"lambda": -5}}"#).unwrap().resolve().unwrap_err();
        assert!(e.to_string().contains("spectrum"), "{e}");
        assert_eq!(e.exit_code(), 2);
        let e = RunConfig::from_json(r#"{"spectrum": {"lambda": 5}, "coupling": {"r1": 0.5, "alpha1": 1}}"#)
            .unwrap()
            .resolve()
            .unwrap_err();
        assert!(e.to_string().contains("coupling"), "{e}");
        let e = RunConfig::from_json(r#"{"spectrum": {"lambda": 5}, "grid": {"t_end": 1, "h": 0.3}}"#)
            .unwrap()
            .resolve()
            .unwrap_err();
        assert!(e.to_string().contains("grid"), "{e}");
    }

    #[test]
    fn custom_state_and_couplings() {
        let cfg = RunConfig::from_json(
            r#"{"spectrum": {"W": 1, "lambda": 1, "delta": 5},
                "coupling": {"alpha1": 0.6, "alpha2": 0.8},
                "initial_state": {"custom": {"c10": [0.6, 0], "c20": [0, 0.8]}},
                "solver": "all"}"#,
        )
        .unwrap();
        let run = cfg.resolve().unwrap();
        assert_eq!(run.schemes.len(), 3);
        assert_eq!(run.initial.c20(), Complex64::new(0.0, 0.8));
        assert!(RunConfig::from_json(r#"{"spectrum": {"lambda": 1}, "initial_state": {"custom": {"c10": [1, 0], "c20": [1, 0]}}}"#)
            .unwrap()
            .resolve()
            .is_err());
    }

    #[test]
    fn sweep_values_sorted_and_validated() {
        let spec = SweepSpec::from_json(
            r#"{"base": {"spectrum": {"lambda": 5}}, "parameter": "lambda",
                "values": [10, 5, 8], "metrics": ["half_time"]}"#,
        )
        .unwrap();
        assert_eq!(spec.values().unwrap(), vec![5.0, 8.0, 10.0]);
        spec.validate().unwrap();

        let ranged = SweepSpec::from_json(
            r#"{"base": {"spectrum": {"lambda": 5}}, "parameter": "r1",
                "range": {"start": 0.2, "stop": 0.8, "count": 4}, "metrics": ["fit_rate"]}"#,
        )
        .unwrap();
        let v = ranged.values().unwrap();
        assert_eq!(v.len(), 4);
        assert!((v[3] - 0.8).abs() < 1e-15);

        let bad = SweepSpec::from_json(
            r#"{"base": {"spectrum": {"lambda": 5}}, "parameter": "lambda",
                "values": [5, -1], "metrics": ["gamma_asym"]}"#,
        )
        .unwrap();
        let e = bad.validate().unwrap_err();
        assert!(e.to_string().contains("lambda=-1"), "{e}");
    }
}
