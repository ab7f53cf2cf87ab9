use std::path::{Path, PathBuf};

use cavity_zeno::analytic::DEGENERACY_THRESHOLD;
use cavity_zeno::model::{LEAKAGE_TOLERANCE, NORM_TOLERANCE};
use cavity_zeno::oracle::{PSEUDOMODE_MAX_STIFFNESS, VOLTERRA_MAX_STIFFNESS};
use cavity_zeno::{characteristic_roots, compare_series, solve, AmplitudeSeries, Scheme};
use serde::Serialize;

use crate::config::{ResolvedRun, RunConfig};
use crate::error::Result;
use crate::output::{ensure_dir, file_name, write_json, write_series};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const METADATA_FILE: &str = "run.json";
pub const COMPARISON_FILE: &str = "comparison.json";
/// Expected oracle agreement at the default grid.
pub const AGREEMENT_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub norm: f64,
    pub leakage: f64,
    pub root_degeneracy: f64,
    pub volterra_max_stiffness: f64,
    pub pseudomode_max_stiffness: f64,
}

impl Tolerances {
    pub fn current() -> Self {
        Tolerances {
            norm: NORM_TOLERANCE,
            leakage: LEAKAGE_TOLERANCE,
            root_degeneracy: DEGENERACY_THRESHOLD,
            volterra_max_stiffness: VOLTERRA_MAX_STIFFNESS,
            pseudomode_max_stiffness: PSEUDOMODE_MAX_STIFFNESS,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedParameters {
    pub transition_strength: f64,
    pub half_width: f64,
    pub detuning: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub r1: f64,
    pub r2: f64,
    pub rabi_frequency: f64,
    pub c10: [f64; 2],
    pub c20: [f64; 2],
    pub root_plus: [f64; 2],
    pub root_minus: [f64; 2],
    pub t_end: f64,
    pub h: f64,
    pub steps: usize,
}

impl ResolvedParameters {
    pub fn new(run: &ResolvedRun) -> Result<Self> {
        let spec = &run.spectrum;
        let rabi = run.coupling.rabi_frequency(spec.transition_strength());
        let roots = characteristic_roots(rabi, spec.half_width(), spec.detuning())?;
        let grid = run.grid(Scheme::Analytic)?;
        Ok(ResolvedParameters {
            transition_strength: spec.transition_strength(),
            half_width: spec.half_width(),
            detuning: spec.detuning(),
            alpha1: run.coupling.alpha1(),
            alpha2: run.coupling.alpha2(),
            r1: run.coupling.r1(),
            r2: run.coupling.r2(),
            rabi_frequency: rabi,
            c10: [run.initial.c10().re, run.initial.c10().im],
            c20: [run.initial.c20().re, run.initial.c20().im],
            root_plus: [roots.plus.re, roots.plus.im],
            root_minus: [roots.minus.re, roots.minus.im],
            t_end: run.t_end,
            h: run.step,
            steps: grid.steps(),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub resolved: ResolvedParameters,
    pub tolerances: Tolerances,
    pub outputs: Vec<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairDeviation {
    pub a: Scheme,
    pub b: Scheme,
    pub sup_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub pairs: Vec<PairDeviation>,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
}

impl ComparisonReport {
    pub fn new(runs: &[(Scheme, AmplitudeSeries)]) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, (a, sa)) in runs.iter().enumerate() {
            for (b, sb) in &runs[i + 1..] {
                pairs.push(PairDeviation {
                    a: *a,
                    b: *b,
                    sup_deviation: compare_series(sa, sb)?,
                });
            }
        }
        let max_deviation = pairs.iter().map(|p| p.sup_deviation).fold(0.0, f64::max);
        Ok(ComparisonReport {
            pairs,
            max_deviation,
            tolerance: AGREEMENT_TOLERANCE,
            within_tolerance: max_deviation < AGREEMENT_TOLERANCE,
        })
    }
}

#[derive(Debug)]
pub struct DynamicsOutput {
    pub series: Vec<(Scheme, AmplitudeSeries)>,
    pub files: Vec<PathBuf>,
    pub comparison: Option<ComparisonReport>,
}

pub fn series_file(scheme: Scheme) -> String {
    format!("dynamics_{}.csv", scheme.name())
}

/// Solves every selected scheme and writes `dynamics_<scheme>.csv`, the
/// metadata sidecar and, for more than one scheme, a comparison report.
pub fn run_dynamics(config: &RunConfig, out_dir: &Path) -> Result<DynamicsOutput> {
    let run = config.resolve()?;
    let resolved = ResolvedParameters::new(&run)?;
    let mut series = Vec::new();
    for &scheme in &run.schemes {
        let s = solve(&run.spectrum, &run.coupling, &run.initial, &run.grid(scheme)?)?;
        series.push((scheme, s));
    }
    let comparison = if series.len() > 1 {
        Some(ComparisonReport::new(&series)?)
    } else {
        None
    };

    ensure_dir(out_dir)?;
    let mut files = Vec::new();
    for (scheme, s) in &series {
        let path = out_dir.join(series_file(*scheme));
        write_series(&path, s)?;
        files.push(path);
    }
    if let Some(report) = &comparison {
        let path = out_dir.join(COMPARISON_FILE);
        write_json(&path, report)?;
        files.push(path);
    }
    let metadata = RunMetadata {
        tool: "cavity-zeno",
        version: VERSION,
        config: RunConfig {
            output_dir: None,
            ..config.clone()
        },
        resolved,
        tolerances: Tolerances::current(),
        outputs: files.iter().map(|p| file_name(p)).collect(),
    };
    let meta_path = out_dir.join(METADATA_FILE);
    write_json(&meta_path, &metadata)?;
    files.push(meta_path);
    Ok(DynamicsOutput {
        series,
        files,
        comparison,
    })
}
