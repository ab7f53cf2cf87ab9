//! Globally adaptive 15-point Gauss–Kronrod quadrature on finite intervals.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Kronrod abscissae on [0, 1]; odd indices are the embedded Gauss points.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Integral estimate with its absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            absolute: 1e-14,
            relative: 1e-10,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod panel with the embedded 7-point Gauss rule as
/// error estimate.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    Estimate {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Adaptive bisection of `[a, b]`, always splitting the segment with the
/// largest error estimate.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    integrate_panels(&f, &[a, b], tol)
}

/// Like [`integrate`] but starting from the given breakpoints, which must be
/// increasing. Useful when the integrand has known zeros or kinks.
pub fn integrate_panels<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], tol: Tolerance) -> Result<Estimate> {
    let mut heap = BinaryHeap::with_capacity(breaks.len() + 16);
    let (mut value, mut error) = (0.0, 0.0);
    for w in breaks.windows(2) {
        let e = gauss_kronrod(f, w[0], w[1]);
        value += e.value;
        error += e.error;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value: e.value,
            error: e.error,
        });
    }
    let budget = tol.max_intervals.max(breaks.len());
    loop {
        let target = tol.absolute.max(tol.relative * value.abs());
        if error <= target {
            return Ok(Estimate { value, error });
        }
        if heap.len() >= budget {
            return Err(Error::Quadrature {
                error,
                tolerance: target,
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod(f, worst.a, mid);
        let right = gauss_kronrod(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: left.value,
            error: left.error,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: right.value,
            error: right.error,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact_on_one_panel() {
        // Kronrod-15 is exact through degree 22.
        let e = gauss_kronrod(&|x: f64| x.powi(10) - 3.0 * x.powi(3), 0.0, 2.0);
        let exact = 2f64.powi(11) / 11.0 - 3.0 * 4.0;
        assert!((e.value - exact).abs() < 1e-12);
    }

    #[test]
    fn adaptive_lorentzian() {
        let l = 0.01;
        let f = |x: f64| l / (std::f64::consts::PI * (x * x + l * l));
        let e = integrate(f, -1.0, 1.0, Tolerance::default()).unwrap();
        let exact = 2.0 * (1.0f64 / l).atan() / std::f64::consts::PI;
        assert!((e.value - exact).abs() < 1e-10);
    }

    #[test]
    fn reports_non_convergence() {
        let tol = Tolerance {
            absolute: 0.0,
            relative: 1e-15,
            max_intervals: 3,
        };
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, tol);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
