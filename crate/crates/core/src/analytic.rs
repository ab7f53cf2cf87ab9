//! Exact solution of the amplitude equations by Laplace transform.
//!
//! The superradiant amplitude obeys `s^2 + (lambda + i delta) s + Omega_R^2 = 0`
//! in the Laplace domain; its inverse transform `epsilon(t)` drives both atomic
//! amplitudes while the subradiant component is frozen.

use nalgebra::{DMatrix, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::grid::SolverGrid;
use crate::model::{
    project_initial, AmplitudeSeries, CouplingConfig, DensityMatrix4, InitialAmplitudes,
    LorentzianSpectrum, ProjectionPair, LEAKAGE_TOLERANCE,
};

/// Relative gap below which the two roots are treated as a double root.
pub const DEGENERACY_THRESHOLD: f64 = 1e-9;

/// Roots of `s^2 + (lambda + i delta) s + Omega_R^2 = 0`.
///
/// `plus = -(lambda + i delta)/2 + D` with `D` the principal square root of
/// the discriminant, so `plus` is always the slower-decaying root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicRoots {
    pub plus: Complex64,
    pub minus: Complex64,
    pub degenerate: bool,
    half_gap: Complex64,
}

impl CharacteristicRoots {
    /// The root with the largest real part.
    pub fn dominant(&self) -> Complex64 {
        self.plus
    }

    /// Long-time decay rate of `|epsilon|^2`, `2 |Re s_+|`.
    pub fn survival_decay_rate(&self) -> f64 {
        -2.0 * self.plus.re
    }

    /// `(s_+ - s_-) / 2`.
    pub fn half_gap(&self) -> Complex64 {
        self.half_gap
    }

    pub fn max_magnitude(&self) -> f64 {
        self.plus.norm().max(self.minus.norm())
    }
}

pub fn characteristic_roots(rabi: f64, half_width: f64, detuning: f64) -> Result<CharacteristicRoots> {
    ensure_positive("rabi_frequency", rabi)?;
    ensure_positive("half_width", half_width)?;
    ensure_finite("detuning", detuning)?;

    let half = Complex64::new(half_width, detuning) * 0.5;
    let product = rabi * rabi;
    let d = (half * half - product).sqrt();

    // Take the large-magnitude root directly and the other from the product
    // to avoid cancellation.
    let (plus, minus) = if (half + d).norm() >= (half - d).norm() {
        let minus = -half - d;
        (product / minus, minus)
    } else {
        let plus = -half + d;
        (plus, product / plus)
    };

    let degenerate = 2.0 * d.norm() < DEGENERACY_THRESHOLD * half_width.max(rabi);
    Ok(CharacteristicRoots {
        plus,
        minus,
        degenerate,
        half_gap: d,
    })
}

/// `sinh(z)/z` by its Taylor series; only used for `|z| < 1`.
fn sinhc_series(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..=12 {
        term *= z2 / ((2 * k) as f64 * (2 * k + 1) as f64);
        sum += term;
    }
    sum
}

/// Superradiant survival amplitude `epsilon(t)`.
///
/// Uses the two-exponential form away from the double root and the confluent
/// limit `e^{st}(1 + (s + lambda + i delta) t)` when `roots.degenerate` is set.
pub fn epsilon(t: f64, roots: &CharacteristicRoots, half_width: f64, detuning: f64) -> Result<Complex64> {
    ensure_finite("t", t)?;
    if t < 0.0 {
        return Err(Error::NegativeTime { what: "t", value: t });
    }
    let kappa = Complex64::new(half_width, detuning);
    if roots.degenerate {
        let s = -0.5 * kappa;
        return Ok((s * t).exp() * (1.0 + (s + kappa) * t));
    }
    let dt = roots.half_gap * t;
    if dt.norm() < 0.5 {
        // Same expression regrouped as exp(-kappa t/2)[cosh(Dt) + (kappa/2) t sinhc(Dt)],
        // free of the 1/(s+ - s-) cancellation for short times.
        return Ok((-0.5 * kappa * t).exp() * (dt.cosh() + 0.5 * kappa * t * sinhc_series(dt)));
    }
    let (sp, sm) = (roots.plus, roots.minus);
    Ok(((sp + kappa) * (sp * t).exp() - (sm + kappa) * (sm * t).exp()) / (sp - sm))
}

/// `c1 = r2 beta_- + r1 beta_+ epsilon(t)`, `c2 = -r1 beta_- + r2 beta_+ epsilon(t)`.
pub fn amplitudes(
    t: f64,
    coupling: &CouplingConfig,
    projections: &ProjectionPair,
    roots: &CharacteristicRoots,
    half_width: f64,
    detuning: f64,
) -> Result<(Complex64, Complex64)> {
    let eps = epsilon(t, roots, half_width, detuning)?;
    Ok(projections.reconstruct(coupling, eps))
}

/// `P(t) = |epsilon(t)|^2`.
pub fn survival_probability(
    t: f64,
    roots: &CharacteristicRoots,
    half_width: f64,
    detuning: f64,
) -> Result<f64> {
    Ok(epsilon(t, roots, half_width, detuning)?.norm_sqr())
}

/// The one-excitation two-atom state with leakage `1 - |c1|^2 - |c2|^2` into
/// `|gg>`.
pub fn reduced_density_matrix(c1: Complex64, c2: Complex64) -> Result<DensityMatrix4> {
    let mut norm = c1.norm_sqr() + c2.norm_sqr();
    if !(norm <= 1.0 + LEAKAGE_TOLERANCE) {
        return Err(Error::NotNormalized { norm });
    }
    let (mut c1, mut c2) = (c1, c2);
    if norm > 1.0 {
        // Round-off overshoot: pull back onto the unit sphere.
        let scale = norm.sqrt().recip();
        c1 *= scale;
        c2 *= scale;
        norm = c1.norm_sqr() + c2.norm_sqr();
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut m = Matrix4::from_element(zero);
    m[(1, 1)] = Complex64::new(c1.norm_sqr(), 0.0);
    m[(2, 2)] = Complex64::new(c2.norm_sqr(), 0.0);
    m[(1, 2)] = c1 * c2.conj();
    m[(2, 1)] = c2 * c1.conj();
    m[(3, 3)] = Complex64::new((1.0 - norm).max(0.0), 0.0);
    DensityMatrix4::new(m)
}

/// `C = 2 |c1| |c2|`.
pub fn concurrence(c1: Complex64, c2: Complex64) -> f64 {
    2.0 * c1.norm() * c2.norm()
}

/// Eigenvalues of the state below this fraction are treated as exact zeros.
const RANK_CUTOFF: f64 = 1e-13;

/// General two-qubit concurrence `max(0, l1 - l2 - l3 - l4)`, where `l_i` are
/// the square roots of the eigenvalues of `rho (Y rho* Y)` with
/// `Y = sigma_y (x) sigma_y`, in decreasing order.
///
/// The `l_i` are obtained as singular values of `tau = V^T Y V` for a
/// factorization `rho = V V^dagger` built from the eigen-decomposition of
/// `rho`, which avoids diagonalizing the non-Hermitian product.
pub fn wootters_concurrence(rho: &DensityMatrix4) -> f64 {
    let eig = SymmetricEigen::new(*rho.matrix());
    let kept: Vec<usize> = (0..4).filter(|&i| eig.eigenvalues[i] > RANK_CUTOFF).collect();
    if kept.is_empty() {
        return 0.0;
    }
    let v = DMatrix::from_fn(4, kept.len(), |r, c| {
        let k = kept[c];
        eig.eigenvectors[(r, k)] * eig.eigenvalues[k].sqrt()
    });
    let y = spin_flip();
    let tau = v.transpose() * y * &v;
    let mut sv: Vec<f64> = tau.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let rest: f64 = sv.iter().skip(1).sum();
    (sv[0] - rest).max(0.0)
}

fn spin_flip() -> DMatrix<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let mut y = DMatrix::from_element(4, 4, Complex64::new(0.0, 0.0));
    y[(0, 3)] = -one;
    y[(1, 2)] = one;
    y[(2, 1)] = one;
    y[(3, 0)] = -one;
    y
}

/// Closed-form dynamics for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticSolution {
    coupling: CouplingConfig,
    projections: ProjectionPair,
    roots: CharacteristicRoots,
    half_width: f64,
    detuning: f64,
}

impl AnalyticSolution {
    pub fn new(
        spectrum: &LorentzianSpectrum,
        coupling: &CouplingConfig,
        init: &InitialAmplitudes,
    ) -> Result<Self> {
        let rabi = coupling.rabi_frequency(spectrum.transition_strength());
        let roots = characteristic_roots(rabi, spectrum.half_width(), spectrum.detuning())?;
        Ok(Self {
            coupling: *coupling,
            projections: project_initial(coupling, init),
            roots,
            half_width: spectrum.half_width(),
            detuning: spectrum.detuning(),
        })
    }

    pub fn roots(&self) -> &CharacteristicRoots {
        &self.roots
    }

    pub fn projections(&self) -> &ProjectionPair {
        &self.projections
    }

    pub fn epsilon(&self, t: f64) -> Result<Complex64> {
        epsilon(t, &self.roots, self.half_width, self.detuning)
    }

    pub fn amplitudes(&self, t: f64) -> Result<(Complex64, Complex64)> {
        amplitudes(
            t,
            &self.coupling,
            &self.projections,
            &self.roots,
            self.half_width,
            self.detuning,
        )
    }

    pub fn survival_probability(&self, t: f64) -> Result<f64> {
        Ok(self.epsilon(t)?.norm_sqr())
    }

    pub fn series(&self, grid: &SolverGrid) -> Result<AmplitudeSeries> {
        let times = grid.times();
        let mut c1 = Vec::with_capacity(times.len());
        let mut c2 = Vec::with_capacity(times.len());
        for &t in &times {
            let (a, b) = self.amplitudes(t)?;
            c1.push(a);
            c2.push(b);
        }
        AmplitudeSeries::new(times, c1, c2)
    }
}

/// Evaluates the exact solution on `grid`.
pub fn analytic_solve(
    spectrum: &LorentzianSpectrum,
    coupling: &CouplingConfig,
    init: &InitialAmplitudes,
    grid: &SolverGrid,
) -> Result<AmplitudeSeries> {
    AnalyticSolution::new(spectrum, coupling, init)?.series(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn roots_overdamped_resonant() {
        let r = characteristic_roots(1.0, 5.0, 0.0).unwrap();
        let disc = 21f64.sqrt();
        assert!((r.plus - c((-5.0 + disc) / 2.0, 0.0)).norm() < 1e-14);
        assert!((r.minus - c((-5.0 - disc) / 2.0, 0.0)).norm() < 1e-14);
        assert!((r.plus.re + 0.208712152522).abs() < 1e-11);
        assert!(!r.degenerate);

        let r10 = characteristic_roots(1.0, 10.0, 0.0).unwrap();
        assert!((r10.dominant().re + 0.101020514434).abs() < 1e-11);
    }

    #[test]
    fn roots_double_root() {
        let r = characteristic_roots(1.0, 2.0, 0.0).unwrap();
        assert!(r.degenerate);
        assert!((r.plus - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((r.minus - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn roots_reject_bad_input() {
        assert!(characteristic_roots(0.0, 1.0, 0.0).is_err());
        assert!(characteristic_roots(1.0, -1.0, 0.0).is_err());
        assert!(characteristic_roots(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn epsilon_initial_value_and_slope() {
        for &(l, d) in &[(5.0, 0.0), (1.0, 20.0), (2.0, 0.0), (0.3, 4.0)] {
            let r = characteristic_roots(1.0, l, d).unwrap();
            assert_eq!(epsilon(0.0, &r, l, d).unwrap(), c(1.0, 0.0));
            let h = 1e-5;
            let e1 = epsilon(h, &r, l, d).unwrap();
            let e2 = epsilon(2.0 * h, &r, l, d).unwrap();
            let slope = (-3.0 * c(1.0, 0.0) + 4.0 * e1 - e2) / (2.0 * h);
            assert!(slope.norm() < 1e-6, "slope {slope} at lambda={l} delta={d}");
        }
    }

    #[test]
    fn epsilon_rejects_negative_time() {
        let r = characteristic_roots(1.0, 5.0, 0.0).unwrap();
        assert!(matches!(epsilon(-1.0, &r, 5.0, 0.0), Err(Error::NegativeTime { .. })));
    }

    #[test]
    fn epsilon_branches_agree() {
        // Short-time regrouped form vs the plain two-exponential form.
        let (l, d) = (3.0, 1.5);
        let r = characteristic_roots(1.0, l, d).unwrap();
        let kappa = c(l, d);
        let t = 0.49 / r.half_gap().norm();
        let direct = ((r.plus + kappa) * (r.plus * t).exp() - (r.minus + kappa) * (r.minus * t).exp())
            / (r.plus - r.minus);
        assert!((epsilon(t, &r, l, d).unwrap() - direct).norm() < 1e-13);
    }

    #[test]
    fn confluent_limit_is_continuous() {
        let exact = characteristic_roots(1.0, 2.0, 0.0).unwrap();
        // kappa = 2 + i delta puts |D| ~ sqrt(delta) = 1.5e-9, just above the
        // threshold 2|D| >= 2e-9.
        let delta = 1.5e-9f64 * 1.5e-9;
        let near = characteristic_roots(1.0, 2.0, delta).unwrap();
        assert!(!near.degenerate);
        for &t in &[0.1, 1.0, 3.0, 10.0] {
            let a = epsilon(t, &exact, 2.0, 0.0).unwrap();
            let b = epsilon(t, &near, 2.0, delta).unwrap();
            assert!((a - b).norm() < 1e-8, "t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn subradiant_amplitudes_are_frozen() {
        let coupling = CouplingConfig::new(0.6, 0.8).unwrap();
        let spec = LorentzianSpectrum::with_detuning(1.0, 5.0, 2.0).unwrap();
        let sol = AnalyticSolution::new(&spec, &coupling, &InitialAmplitudes::psi_minus(&coupling)).unwrap();
        for &t in &[0.0, 0.5, 3.0, 10.0] {
            let (a, b) = sol.amplitudes(t).unwrap();
            assert!((a - c(0.8, 0.0)).norm() < 1e-15);
            assert!((b - c(-0.6, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn symmetric_phi_plus_concurrence_equals_survival() {
        let spec = LorentzianSpectrum::with_detuning(1.0, 8.0, 0.0).unwrap();
        let sol = AnalyticSolution::new(&spec, &CouplingConfig::symmetric(), &InitialAmplitudes::phi_plus()).unwrap();
        for &t in &[0.0, 0.7, 2.0, 9.0] {
            let (a, b) = sol.amplitudes(t).unwrap();
            let eps = sol.epsilon(t).unwrap();
            assert!((a - eps * FRAC_1_SQRT_2).norm() < 1e-15);
            assert!((concurrence(a, b) - sol.survival_probability(t).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn density_matrix_examples() {
        let rho = reduced_density_matrix(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(rho.get(1, 1), c(1.0, 0.0));
        assert_eq!(rho.get(3, 3), c(0.0, 0.0));

        let rho = reduced_density_matrix(c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(rho.get(3, 3), c(1.0, 0.0));
        assert!((wootters_concurrence(&rho)).abs() < 1e-15);

        let a = c(FRAC_1_SQRT_2, 0.0);
        let rho = reduced_density_matrix(a, a).unwrap();
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!((rho.get(i, j) - c(0.5, 0.0)).norm() < 1e-15);
        }
        assert!((wootters_concurrence(&rho) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_matrix_rejects_overnormalized() {
        assert!(reduced_density_matrix(c(1.0, 0.0), c(0.1, 0.0)).is_err());
        // Round-off overshoot is accepted.
        assert!(reduced_density_matrix(c(1.0 + 1e-12, 0.0), c(0.0, 0.0)).is_ok());
    }

    #[test]
    fn density_matrix_validation() {
        let mut m = Matrix4::from_element(c(0.0, 0.0));
        m[(0, 0)] = c(1.0, 0.0);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(DensityMatrix4::new(m).is_err());
        m[(0, 1)] = c(0.0, 0.0);
        m[(1, 1)] = c(0.5, 0.0);
        assert!(DensityMatrix4::new(m).is_err());
    }

    #[test]
    fn concurrence_examples() {
        let a = c(FRAC_1_SQRT_2, 0.0);
        assert!((concurrence(a, a) - 1.0).abs() < 1e-15);
        assert_eq!(concurrence(c(1.0, 0.0), c(0.0, 0.0)), 0.0);
    }
}
