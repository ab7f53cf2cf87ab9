use std::path::{Path, PathBuf};

use cavity_zeno::{asymptotic_rate, fit_rate, half_time, solve, AmplitudeSeries};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Metric, ResolvedRun, SweepSpec};
use crate::dynamics::VERSION;
use crate::error::{CliError, Result};
use crate::output::{ensure_dir, fmt_f64, write_file, write_json};

pub const SUMMARY_FILE: &str = "sweep_summary.csv";
pub const METADATA_FILE: &str = "sweep.json";
/// The half-time horizon is doubled until the level is crossed, the
/// concurrence has settled, or the grid would exceed this many steps; the
/// latter two report an infinite half-time.
pub const MAX_HORIZON_STEPS: usize = 1 << 21;
const SETTLED_SPREAD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub metrics: Vec<f64>,
}

#[derive(Debug)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub files: Vec<PathBuf>,
}

#[derive(Serialize)]
struct SweepMetadata<'a> {
    tool: &'static str,
    version: &'static str,
    spec: &'a SweepSpec,
    values: Vec<f64>,
    max_horizon_steps: usize,
}

fn solve_until(run: &ResolvedRun, t_end: f64) -> Result<AmplitudeSeries> {
    let scheme = run.schemes[0];
    let grid = cavity_zeno::SolverGrid::new(t_end, run.step, scheme)?;
    Ok(solve(&run.spectrum, &run.coupling, &run.initial, &grid)?)
}

fn settled(series: &AmplitudeSeries) -> bool {
    let c = series.concurrence();
    let tail = &c[c.len() / 2..];
    let (lo, hi) = tail.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    hi - lo <= SETTLED_SPREAD
}

/// Time at which the concurrence first falls to `fraction` of its initial
/// value, extending the horizon by doubling until it does.
pub fn half_time_extended(run: &ResolvedRun, first: &AmplitudeSeries, fraction: f64) -> Result<f64> {
    let level = fraction * first.concurrence()[0];
    let mut t = half_time(first, level)?;
    let mut series_settled = settled(first);
    let mut horizon = run.t_end;
    while t.is_infinite() && !series_settled && 2.0 * horizon / run.step <= MAX_HORIZON_STEPS as f64 {
        horizon *= 2.0;
        let s = solve_until(run, horizon)?;
        t = half_time(&s, level)?;
        series_settled = settled(&s);
    }
    Ok(t)
}

fn evaluate(spec: &SweepSpec, value: f64) -> Result<SweepRow> {
    let run = spec.parameter.apply(&spec.base, value).resolve()?;
    let needs_series = spec.metrics.iter().any(|m| *m != Metric::GammaAsym);
    let series = if needs_series {
        Some(solve_until(&run, run.t_end)?)
    } else {
        None
    };
    let mut metrics = Vec::with_capacity(spec.metrics.len());
    for metric in &spec.metrics {
        let x = match (metric, &series) {
            (Metric::GammaAsym, _) => asymptotic_rate(&run.spectrum, 0.0),
            (Metric::FitRate, Some(s)) => {
                let [a, b] = spec.fit_window;
                fit_rate(s, (a * run.t_end, b * run.t_end))?
            }
            (Metric::HalfTime, Some(s)) => half_time_extended(&run, s, spec.half_time_level)?,
            _ => unreachable!("series is computed for every time-domain metric"),
        };
        metrics.push(x);
    }
    Ok(SweepRow { value, metrics })
}

pub fn summary_csv(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let mut out = String::from("param,value");
    for m in &spec.metrics {
        out.push(',');
        out.push_str(m.name());
    }
    out.push('\n');
    for row in rows {
        out.push_str(spec.parameter.name());
        out.push(',');
        out.push_str(&fmt_f64(row.value));
        for &x in &row.metrics {
            out.push(',');
            out.push_str(&fmt_f64(x));
        }
        out.push('\n');
    }
    out
}

/// Evaluates every sweep point in parallel; rows come back in ascending
/// parameter order and the first failing point (in that order) aborts.
pub fn run_sweep(spec: &SweepSpec, out_dir: &Path) -> Result<SweepOutput> {
    spec.validate()?;
    let values = spec.values()?;
    let results: Vec<Result<SweepRow>> = values.par_iter().map(|&v| evaluate(spec, v)).collect();
    let mut rows = Vec::with_capacity(results.len());
    for (value, r) in values.iter().zip(results) {
        rows.push(r.map_err(|e| CliError::SweepPoint {
            parameter: spec.parameter.name().to_string(),
            value: *value,
            source: Box::new(e),
        })?);
    }

    ensure_dir(out_dir)?;
    let summary = out_dir.join(SUMMARY_FILE);
    write_file(&summary, &summary_csv(spec, &rows))?;
    let meta = out_dir.join(METADATA_FILE);
    let mut spec_out = spec.clone();
    spec_out.base.output_dir = None;
    write_json(
        &meta,
        &SweepMetadata {
            tool: "cavity-zeno",
            version: VERSION,
            spec: &spec_out,
            values,
            max_horizon_steps: MAX_HORIZON_STEPS,
        },
    )?;
    Ok(SweepOutput {
        rows,
        files: vec![summary, meta],
    })
}
