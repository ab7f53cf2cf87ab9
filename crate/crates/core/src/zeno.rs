//! Zeno / anti-Zeno analysis of the decay of the superradiant state.
//!
//! Three rate estimates are provided: the first-order overlap rate
//! `Gamma_eff(t) = 2 pi int J(w) F_t(w) dw` with the sinc^2 filter `F_t`, its
//! long-time limit `2 pi J(w_0)`, and the log-linear fit of a survival series.
//! Disentanglement speed is also measured directly as the half-time of the
//! concurrence.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::model::{AmplitudeSeries, LorentzianSpectrum};
use crate::quadrature::{integrate, integrate_panels, Tolerance};

/// Relative accuracy targeted by [`effective_rate`].
pub const RATE_RELATIVE_TOLERANCE: f64 = 1e-6;

/// Minimum number of grid points inside a fit window.
pub const MIN_FIT_POINTS: usize = 10;

/// Half-width of the integration window in units of `max(1/t, lambda)`.
const WINDOW_WIDTHS: f64 = 40.0;

const MAX_PANELS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `lambda > |delta|`: stronger damping slows the decay.
    Zeno,
    /// `lambda < |delta|`: stronger damping speeds it up.
    AntiZeno,
    Boundary,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Zeno => "zeno",
            Regime::AntiZeno => "anti_zeno",
            Regime::Boundary => "boundary",
        }
    }
}

/// Rates describing one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    /// Elapsed time at which `gamma_eff` was evaluated.
    pub time: f64,
    pub gamma_eff: f64,
    pub gamma_asym: f64,
    pub gamma_fit: Option<f64>,
    pub regime: Regime,
}

impl RateReport {
    pub fn new(spectrum: &LorentzianSpectrum, t: f64) -> Result<Self> {
        let omega0 = spectrum.atom_frequency();
        Ok(Self {
            time: t,
            gamma_eff: effective_rate(spectrum, omega0, t)?,
            gamma_asym: asymptotic_rate(spectrum, omega0),
            gamma_fit: None,
            regime: classify_regime(spectrum.half_width(), spectrum.detuning()),
        })
    }

    pub fn with_fit(mut self, series: &AmplitudeSeries, window: (f64, f64)) -> Result<Self> {
        self.gamma_fit = Some(fit_rate(series, window)?);
        Ok(self)
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `F_t(w) = (t / 2 pi) sinc^2((w - w_0) t / 2)`, unit-normalized in `w`.
pub fn filter_function(omega: f64, omega0: f64, t: f64) -> Result<f64> {
    ensure_finite("omega", omega)?;
    ensure_finite("omega0", omega0)?;
    ensure_positive("t", t)?;
    let s = sinc(0.5 * (omega - omega0) * t);
    Ok(t / (2.0 * PI) * s * s)
}

/// Long-time limit `2 pi J(w_0)`.
pub fn asymptotic_rate(spectrum: &LorentzianSpectrum, omega0: f64) -> f64 {
    2.0 * PI * spectrum.density(omega0)
}

/// First-order decay rate `2 pi int J(w) F_t(w) dw`.
///
/// The overlap is integrated panel by panel between the zeros of the filter
/// over a window covering both `|w - w_0| <= 40 max(1/t, lambda)` and the
/// Lorentzian peak; the tails beyond it are handled semi-analytically.
pub fn effective_rate(spectrum: &LorentzianSpectrum, omega0: f64, t: f64) -> Result<f64> {
    ensure_finite("omega0", omega0)?;
    ensure_positive("t", t)?;
    let lambda = spectrum.half_width();
    let peak = spectrum.center() - omega0;
    let period = 2.0 * PI / t;
    let reach = WINDOW_WIDTHS * (1.0 / t).max(lambda);
    // Window edges sit on filter zeros so the oscillatory tail has no
    // boundary term at leading order.
    let lo = ((-reach).min(peak - WINDOW_WIDTHS * lambda) / period).floor() * period;
    let hi = (reach.max(peak + WINDOW_WIDTHS * lambda) / period).ceil() * period;

    let overlap = |u: f64| {
        let s = sinc(0.5 * u * t);
        spectrum.density(omega0 + u) * t * s * s
    };

    let breaks = panel_breaks(lo, hi, period, peak);
    let tol = Tolerance {
        absolute: 1e-300,
        relative: 1e-3 * RATE_RELATIVE_TOLERANCE,
        max_intervals: 4 * breaks.len() + 2000,
    };
    let main = integrate_panels(&overlap, &breaks, tol)?;

    // Beyond the window t sinc^2(u t/2) = 2 (1 - cos(u t)) / (t u^2). The
    // non-oscillating part is integrated after v = 1/u; the cosine part is
    // integrated by parts, leaving g'(edge)/t^2 with g(u) = J(w_0 + u)/u^2.
    let tail_integrand = |v: f64| {
        if v == 0.0 {
            0.0
        } else {
            spectrum.density(omega0 + 1.0 / v)
        }
    };
    let tail_tol = Tolerance {
        absolute: 1e-300,
        relative: 1e-3 * RATE_RELATIVE_TOLERANCE,
        max_intervals: 2000,
    };
    let upper = integrate(tail_integrand, 0.0, 1.0 / hi, tail_tol)?;
    let lower = integrate(tail_integrand, 1.0 / lo, 0.0, tail_tol)?;
    let g_prime = |u: f64| {
        let x = omega0 + u - spectrum.center();
        let j = spectrum.density(omega0 + u);
        let dj = -2.0 * x * j / (x * x + lambda * lambda);
        dj / (u * u) - 2.0 * j / (u * u * u)
    };
    let cosine = (g_prime(lo) - g_prime(hi)) / (t * t);
    let tail = 2.0 * (upper.value + lower.value - cosine) / t;

    let value = main.value + tail;
    let error = main.error + 2.0 * (upper.error + lower.error) / t;
    if error > RATE_RELATIVE_TOLERANCE * value.abs() {
        return Err(Error::Quadrature {
            error,
            tolerance: RATE_RELATIVE_TOLERANCE * value.abs(),
        });
    }
    Ok(value)
}

/// Breakpoints at the filter zeros `2 pi k / t` inside `[lo, hi]`, plus the
/// Lorentzian center.
fn panel_breaks(lo: f64, hi: f64, period: f64, peak: f64) -> Vec<f64> {
    let k_lo = (lo / period).ceil() as i64;
    let k_hi = (hi / period).floor() as i64;
    let zeros = (k_hi - k_lo + 1).max(0) as usize;
    let stride = zeros.div_ceil(MAX_PANELS).max(1) as i64;
    let mut breaks = Vec::with_capacity(zeros / stride as usize + 3);
    breaks.push(lo);
    let mut k = k_lo;
    while k <= k_hi {
        breaks.push(k as f64 * period);
        k += stride;
    }
    breaks.push(peak);
    breaks.push(hi);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * period);
    breaks
}

/// Zeno when `lambda > |delta|`, anti-Zeno when `lambda < |delta|`, boundary
/// within `1e-9 max(lambda, 1)`; the sign of `dJ(w_0)/d lambda` is
/// `sign(delta^2 - lambda^2)`.
pub fn classify_regime(half_width: f64, detuning: f64) -> Regime {
    let gap = half_width - detuning.abs();
    if gap.abs() <= 1e-9 * half_width.max(1.0) {
        Regime::Boundary
    } else if gap > 0.0 {
        Regime::Zeno
    } else {
        Regime::AntiZeno
    }
}

/// Measurement-picture rate `W^2 tau` with `tau = 1/lambda`.
pub fn heuristic_rate(transition_strength: f64, half_width: f64) -> f64 {
    transition_strength * transition_strength / half_width
}

/// Least-squares slope of `-ln P(t)` over the grid points in `[t_a, t_b]`.
pub fn fit_rate(series: &AmplitudeSeries, window: (f64, f64)) -> Result<f64> {
    let (ta, tb) = window;
    let times = series.times();
    let last = *times.last().expect("series is non-empty");
    let slack = 1e-9 * last.max(1.0);
    if !(ta.is_finite() && tb.is_finite()) || ta < 0.0 || tb > last + slack || ta >= tb {
        return Err(Error::InvalidWindow(format!(
            "[{ta}, {tb}] is not inside [0, {last}]"
        )));
    }
    let points: Vec<(f64, f64)> = times
        .iter()
        .zip(series.survival())
        .filter(|(t, _)| **t >= ta - slack && **t <= tb + slack)
        .map(|(&t, &p)| (t, p))
        .collect();
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::InvalidWindow(format!(
            "[{ta}, {tb}] holds {} grid points, need at least {MIN_FIT_POINTS}",
            points.len()
        )));
    }
    if let Some(&(t, p)) = points.iter().find(|(_, p)| !(*p > 0.0)) {
        return Err(Error::NonPositiveSurvival { t, value: p });
    }
    let n = points.len() as f64;
    let t_mean = points.iter().map(|p| p.0).sum::<f64>() / n;
    let y_mean = points.iter().map(|p| -p.1.ln()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(t, p) in &points {
        let dx = t - t_mean;
        sxy += dx * (-p.ln() - y_mean);
        sxx += dx * dx;
    }
    Ok(sxy / sxx)
}

/// First time the concurrence falls to `level`, linearly interpolated between
/// grid points; `f64::INFINITY` if it never does on the grid.
pub fn half_time(series: &AmplitudeSeries, level: f64) -> Result<f64> {
    let conc = series.concurrence();
    let initial = conc[0];
    if !(level > 0.0 && level < initial) {
        return Err(Error::InvalidLevel { level, initial });
    }
    let times = series.times();
    match conc.iter().position(|&c| c <= level) {
        None => Ok(f64::INFINITY),
        Some(i) => {
            let (t0, t1) = (times[i - 1], times[i]);
            let (c0, c1) = (conc[i - 1], conc[i]);
            Ok(t0 + (c0 - level) / (c0 - c1) * (t1 - t0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn exponential_series(rate: f64, t_end: f64, n: usize) -> AmplitudeSeries {
        let times: Vec<f64> = (0..=n).map(|i| i as f64 * t_end / n as f64).collect();
        let amp: Vec<Complex64> = times
            .iter()
            .map(|t| Complex64::new((-0.5 * rate * t).exp() * std::f64::consts::FRAC_1_SQRT_2, 0.0))
            .collect();
        AmplitudeSeries::new(times, amp.clone(), amp).unwrap()
    }

    #[test]
    fn filter_peak_and_zeros() {
        let t = 3.0;
        assert!((filter_function(1.0, 1.0, t).unwrap() - t / (2.0 * PI)).abs() < 1e-15);
        let z = 1.0 + 2.0 * PI / t;
        assert!(filter_function(z, 1.0, t).unwrap() < 1e-30);
        assert!(filter_function(1.0, 1.0, 0.0).is_err());
        assert!(filter_function(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn regime_examples() {
        assert_eq!(classify_regime(5.0, 0.0), Regime::Zeno);
        assert_eq!(classify_regime(5.0, 20.0), Regime::AntiZeno);
        assert_eq!(classify_regime(5.0, -20.0), Regime::AntiZeno);
        assert_eq!(classify_regime(5.0, 5.0), Regime::Boundary);
    }

    #[test]
    fn heuristic_rate_examples() {
        assert!((heuristic_rate(1.0, 5.0) - 0.2).abs() < 1e-15);
        assert!((heuristic_rate(1.0, 10.0) - 0.5 * heuristic_rate(1.0, 5.0)).abs() < 1e-15);
        let spec = LorentzianSpectrum::with_detuning(1.0, 5.0, 0.0).unwrap();
        let ratio = heuristic_rate(1.0, 5.0) / asymptotic_rate(&spec, 0.0);
        assert!((ratio - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fit_exact_exponential() {
        let s = exponential_series(0.4, 10.0, 1000);
        assert!((fit_rate(&s, (0.0, 10.0)).unwrap() - 0.4).abs() < 1e-9);
        assert!((fit_rate(&s, (2.5, 7.5)).unwrap() - 0.4).abs() < 1e-9);
    }

    #[test]
    fn fit_window_errors() {
        let s = exponential_series(0.4, 10.0, 1000);
        assert!(matches!(fit_rate(&s, (5.0, 5.005)), Err(Error::InvalidWindow(_))));
        assert!(matches!(fit_rate(&s, (5.0, 11.0)), Err(Error::InvalidWindow(_))));
        assert!(matches!(fit_rate(&s, (6.0, 5.0)), Err(Error::InvalidWindow(_))));

        let times: Vec<f64> = (0..=20).map(|i| i as f64).collect();
        let zero = vec![Complex64::new(0.0, 0.0); 21];
        let s = AmplitudeSeries::new(times, zero.clone(), zero).unwrap();
        assert!(matches!(fit_rate(&s, (0.0, 20.0)), Err(Error::NonPositiveSurvival { .. })));
    }

    #[test]
    fn half_time_of_exponential() {
        let s = exponential_series(0.4, 10.0, 10_000);
        let h = half_time(&s, 0.5).unwrap();
        assert!((h - 2f64.ln() / 0.4).abs() < 1e-6);
        assert_eq!(half_time(&s, 1e-6).unwrap(), f64::INFINITY);
        assert!(matches!(half_time(&s, 1.5), Err(Error::InvalidLevel { .. })));
        assert!(matches!(half_time(&s, 0.0), Err(Error::InvalidLevel { .. })));
    }
}
