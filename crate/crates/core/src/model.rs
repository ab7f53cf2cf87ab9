//! Domain types shared by every solver: the Lorentzian cavity spectrum, the
//! atom-field couplings, initial one-excitation states and their projections
//! onto the sub- and superradiant states, time series and the reduced
//! two-atom density matrix.
//!
//! Frequencies are measured in units of the transition strength `W` and times
//! in units of `1/W`; all amplitudes live in the frame rotating at the atomic
//! frequency.

use std::f64::consts::PI;

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::concurrence;
use crate::error::{ensure_finite, ensure_positive, invalid, Error, Result};

/// Tolerance on normalization of states and projections.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Slack allowed on `|c1|^2 + |c2|^2 <= 1` for numerically produced series.
pub const LEAKAGE_TOLERANCE: f64 = 1e-9;

/// Lorentzian spectral density of a lossy cavity mode,
/// `J(w) = W^2 lambda / (pi ((w - w_c)^2 + lambda^2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzianSpectrum {
    transition_strength: f64,
    center: f64,
    half_width: f64,
    atom_frequency: f64,
}

impl LorentzianSpectrum {
    pub fn new(
        transition_strength: f64,
        center: f64,
        half_width: f64,
        atom_frequency: f64,
    ) -> Result<Self> {
        ensure_positive("transition_strength", transition_strength)?;
        ensure_finite("center", center)?;
        ensure_positive("half_width", half_width)?;
        ensure_finite("atom_frequency", atom_frequency)?;
        Ok(Self {
            transition_strength,
            center,
            half_width,
            atom_frequency,
        })
    }

    /// Spectrum in the atomic frame: `w_0 = 0` and `w_c = detuning`.
    pub fn with_detuning(transition_strength: f64, half_width: f64, detuning: f64) -> Result<Self> {
        Self::new(transition_strength, detuning, half_width, 0.0)
    }

    pub fn transition_strength(&self) -> f64 {
        self.transition_strength
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn atom_frequency(&self) -> f64 {
        self.atom_frequency
    }

    /// `delta = w_c - w_0`.
    pub fn detuning(&self) -> f64 {
        self.center - self.atom_frequency
    }

    /// `W < lambda / 2`.
    pub fn is_weak_coupling(&self) -> bool {
        self.transition_strength < 0.5 * self.half_width
    }

    /// `lambda + i delta`, the complex decay constant of the memory kernel.
    pub fn kernel_exponent(&self) -> Complex64 {
        Complex64::new(self.half_width, self.detuning())
    }

    pub fn density(&self, omega: f64) -> f64 {
        let w2 = self.transition_strength * self.transition_strength;
        let x = omega - self.center;
        w2 * self.half_width / (PI * (x * x + self.half_width * self.half_width))
    }

    pub fn kernel(&self, tau: f64) -> Complex64 {
        let w2 = self.transition_strength * self.transition_strength;
        w2 * (-self.kernel_exponent() * tau).exp()
    }
}

/// Evaluates the Lorentzian spectral density at frequency `omega`.
pub fn spectral_density(spectrum: &LorentzianSpectrum, omega: f64) -> Result<f64> {
    ensure_finite("omega", omega)?;
    Ok(spectrum.density(omega))
}

/// Reservoir correlation function `W^2 exp(-(lambda + i delta) tau)` for
/// `tau >= 0`: the Fourier transform of the spectral density taken in the
/// frame rotating at the atomic frequency.
pub fn correlation_kernel(spectrum: &LorentzianSpectrum, tau: f64) -> Result<Complex64> {
    ensure_finite("tau", tau)?;
    if tau < 0.0 {
        return Err(Error::NegativeTime {
            what: "kernel lag",
            value: tau,
        });
    }
    Ok(spectrum.kernel(tau))
}

/// Dimensionless couplings of the two atoms to the cavity field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingConfig {
    alpha1: f64,
    alpha2: f64,
}

impl CouplingConfig {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self> {
        ensure_finite("alpha1", alpha1)?;
        ensure_finite("alpha2", alpha2)?;
        if alpha1 == 0.0 && alpha2 == 0.0 {
            return Err(invalid("alpha", "alpha1 and alpha2 cannot both be zero"));
        }
        Ok(Self { alpha1, alpha2 })
    }

    /// Couplings normalized to `alpha1^2 + alpha2^2 = 1` with `alpha1 = r1`
    /// and `alpha2 = +sqrt(1 - r1^2)`.
    pub fn from_relative(r1: f64) -> Result<Self> {
        ensure_finite("r1", r1)?;
        if r1.abs() > 1.0 {
            return Err(invalid("r1", format!("must lie in [-1, 1] (got {r1})")));
        }
        Self::new(r1, (1.0 - r1 * r1).sqrt())
    }

    /// `r1 = r2 = 1/sqrt(2)` with unit norm.
    pub fn symmetric() -> Self {
        Self {
            alpha1: std::f64::consts::FRAC_1_SQRT_2,
            alpha2: std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    /// `(alpha1^2 + alpha2^2)^(1/2)`.
    pub fn norm(&self) -> f64 {
        self.alpha1.hypot(self.alpha2)
    }

    pub fn r1(&self) -> f64 {
        self.alpha1 / self.norm()
    }

    pub fn r2(&self) -> f64 {
        self.alpha2 / self.norm()
    }

    /// Collective vacuum Rabi frequency `W (alpha1^2 + alpha2^2)^(1/2)`.
    pub fn rabi_frequency(&self, transition_strength: f64) -> f64 {
        transition_strength * self.norm()
    }
}

/// Initial amplitudes of `|e>|g>` and `|g>|e>` with the field in vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialAmplitudes {
    c10: Complex64,
    c20: Complex64,
}

impl InitialAmplitudes {
    pub fn new(c10: Complex64, c20: Complex64) -> Result<Self> {
        if !(c10.re.is_finite() && c10.im.is_finite() && c20.re.is_finite() && c20.im.is_finite())
        {
            return Err(invalid("initial amplitudes", "must be finite"));
        }
        let norm = c10.norm_sqr() + c20.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { c10, c20 })
    }

    /// `(|eg> + |ge>)/sqrt(2)`.
    pub fn phi_plus() -> Self {
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { c10: a, c20: a }
    }

    /// The subradiant state `r2|eg> - r1|ge>` for the given couplings.
    pub fn psi_minus(coupling: &CouplingConfig) -> Self {
        Self {
            c10: Complex64::new(coupling.r2(), 0.0),
            c20: Complex64::new(-coupling.r1(), 0.0),
        }
    }

    pub fn c10(&self) -> Complex64 {
        self.c10
    }

    pub fn c20(&self) -> Complex64 {
        self.c20
    }
}

/// Projections of the initial state onto the subradiant (`minus`) and
/// superradiant (`plus`) states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionPair {
    pub minus: Complex64,
    pub plus: Complex64,
}

impl ProjectionPair {
    /// Rebuilds `(c1, c2)` from the projections with the superradiant part
    /// scaled by `superradiant`.
    pub fn reconstruct(&self, coupling: &CouplingConfig, superradiant: Complex64) -> (Complex64, Complex64) {
        let (r1, r2) = (coupling.r1(), coupling.r2());
        let bright = self.plus * superradiant;
        (r2 * self.minus + r1 * bright, -r1 * self.minus + r2 * bright)
    }
}

/// `beta_- = r2 c10 - r1 c20`, `beta_+ = r1 c10 + r2 c20`.
pub fn project_initial(coupling: &CouplingConfig, init: &InitialAmplitudes) -> ProjectionPair {
    let (r1, r2) = (coupling.r1(), coupling.r2());
    ProjectionPair {
        minus: r2 * init.c10 - r1 * init.c20,
        plus: r1 * init.c10 + r2 * init.c20,
    }
}

/// Amplitudes `c1(t)`, `c2(t)` on a time grid, with the atomic excitation
/// survival `P = |c1|^2 + |c2|^2` and the concurrence `C = 2|c1||c2|`.
///
/// For the symmetric superradiant initial state `P` coincides with
/// `|epsilon(t)|^2`; for the subradiant state it stays at one.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSeries {
    times: Vec<f64>,
    c1: Vec<Complex64>,
    c2: Vec<Complex64>,
    survival: Vec<f64>,
    concurrence: Vec<f64>,
}

impl AmplitudeSeries {
    pub fn new(times: Vec<f64>, c1: Vec<Complex64>, c2: Vec<Complex64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidGrid("series is empty".into()));
        }
        if times.len() != c1.len() || times.len() != c2.len() {
            return Err(Error::InvalidGrid(format!(
                "length mismatch: {} times, {} c1, {} c2",
                times.len(),
                c1.len(),
                c2.len()
            )));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidGrid(format!("grid must start at 0 (got {})", times[0])));
        }
        if let Some(w) = times.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid(format!(
                "times must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        let mut survival = Vec::with_capacity(times.len());
        let mut conc = Vec::with_capacity(times.len());
        for (a, b) in c1.iter().zip(&c2) {
            let p = a.norm_sqr() + b.norm_sqr();
            if !(p <= 1.0 + LEAKAGE_TOLERANCE) {
                return Err(Error::NotNormalized { norm: p });
            }
            // Round-off above 1 (within the leakage tolerance) is clipped.
            survival.push(p.min(1.0));
            conc.push(concurrence(*a, *b).min(1.0));
        }
        Ok(Self {
            times,
            c1,
            c2,
            survival,
            concurrence: conc,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn c1(&self) -> &[Complex64] {
        &self.c1
    }

    pub fn c2(&self) -> &[Complex64] {
        &self.c2
    }

    pub fn survival(&self) -> &[f64] {
        &self.survival
    }

    pub fn concurrence(&self) -> &[f64] {
        &self.concurrence
    }
}

/// Reduced two-atom state in the basis `{|ee>, |eg>, |ge>, |gg>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4 {
    matrix: Matrix4<Complex64>,
}

impl DensityMatrix4 {
    pub const TOLERANCE: f64 = 1e-12;

    pub fn new(matrix: Matrix4<Complex64>) -> Result<Self> {
        for i in 0..4 {
            for j in 0..4 {
                let d = matrix[(i, j)] - matrix[(j, i)].conj();
                if d.norm() > Self::TOLERANCE {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "not Hermitian at ({i}, {j}): deviation {:.3e}",
                        d.norm()
                    )));
                }
            }
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > Self::TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace} differs from 1")));
        }
        if let Some(i) = (0..4).find(|&i| matrix[(i, i)].re < -Self::TOLERANCE) {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative population {} at index {i}",
                matrix[(i, i)].re
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn spectral_density_examples() {
        let s5 = LorentzianSpectrum::with_detuning(1.0, 5.0, 0.0).unwrap();
        let peak = spectral_density(&s5, 0.0).unwrap();
        assert!((peak - 0.063_661_977_236_758_13).abs() < 1e-15);
        assert!((spectral_density(&s5, 5.0).unwrap() - 0.5 * peak).abs() < 1e-15);
        assert_eq!(spectral_density(&s5, 3.0).unwrap(), spectral_density(&s5, -3.0).unwrap());
        assert!(spectral_density(&s5, f64::NAN).is_err());

        let peaks: Vec<f64> = [5.0, 8.0, 10.0]
            .iter()
            .map(|&l| LorentzianSpectrum::with_detuning(1.0, l, 0.0).unwrap().density(0.0))
            .collect();
        assert!(peaks[0] > peaks[1] && peaks[1] > peaks[2]);
    }

    #[test]
    fn spectrum_invariants() {
        assert!(LorentzianSpectrum::new(0.0, 0.0, 1.0, 0.0).is_err());
        assert!(LorentzianSpectrum::new(1.0, 0.0, 0.0, 0.0).is_err());
        assert!(LorentzianSpectrum::new(1.0, f64::INFINITY, 1.0, 0.0).is_err());
        let s = LorentzianSpectrum::new(1.0, 3.0, 5.0, 1.0).unwrap();
        assert_eq!(s.detuning(), 2.0);
        assert!(s.is_weak_coupling());
        assert!(!LorentzianSpectrum::with_detuning(1.0, 1.0, 0.0).unwrap().is_weak_coupling());
    }

    #[test]
    fn kernel_examples() {
        let s = LorentzianSpectrum::with_detuning(1.0, 5.0, 0.0).unwrap();
        assert_eq!(correlation_kernel(&s, 0.0).unwrap(), c(1.0));
        let k = correlation_kernel(&s, 0.2).unwrap();
        assert!((k - c((-1.0f64).exp())).norm() < 1e-15);
        assert!(matches!(correlation_kernel(&s, -0.1), Err(Error::NegativeTime { .. })));

        let detuned = LorentzianSpectrum::with_detuning(1.0, 5.0, 20.0).unwrap();
        for &tau in &[0.0, 0.1, 0.7, 3.0] {
            let a = correlation_kernel(&s, tau).unwrap().norm();
            let b = correlation_kernel(&detuned, tau).unwrap().norm();
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn coupling_derived_quantities() {
        let k = CouplingConfig::new(3.0, 4.0).unwrap();
        assert!((k.norm() - 5.0).abs() < 1e-15);
        assert!((k.r1() - 0.6).abs() < 1e-15 && (k.r2() - 0.8).abs() < 1e-15);
        assert!((k.r1().powi(2) + k.r2().powi(2) - 1.0).abs() < 1e-12);
        assert!((k.rabi_frequency(2.0) - 10.0).abs() < 1e-14);
        assert!(CouplingConfig::new(0.0, 0.0).is_err());
        assert!(CouplingConfig::from_relative(1.5).is_err());
        let s = CouplingConfig::symmetric();
        assert!((s.rabi_frequency(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn initial_state_normalization() {
        assert!(InitialAmplitudes::new(c(1.0), c(0.1)).is_err());
        assert!(InitialAmplitudes::new(c(0.6), Complex64::new(0.0, 0.8)).is_ok());
    }

    #[test]
    fn projection_examples() {
        let sym = CouplingConfig::symmetric();
        let p = project_initial(&sym, &InitialAmplitudes::phi_plus());
        assert!(p.minus.norm() < 1e-15 && (p.plus - c(1.0)).norm() < 1e-15);

        let anti = InitialAmplitudes::new(c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)).unwrap();
        let p = project_initial(&sym, &anti);
        assert!((p.minus - c(1.0)).norm() < 1e-15 && p.plus.norm() < 1e-15);

        let k = CouplingConfig::new(0.6, 0.8).unwrap();
        let p = project_initial(&k, &InitialAmplitudes::new(c(1.0), c(0.0)).unwrap());
        assert!((p.minus - c(0.8)).norm() < 1e-15 && (p.plus - c(0.6)).norm() < 1e-15);
    }

    #[test]
    fn series_validation() {
        let z = vec![c(0.0); 3];
        assert!(AmplitudeSeries::new(vec![0.0, 1.0, 1.0], z.clone(), z.clone()).is_err());
        assert!(AmplitudeSeries::new(vec![0.5, 1.0, 2.0], z.clone(), z.clone()).is_err());
        assert!(AmplitudeSeries::new(vec![0.0, 1.0], z.clone(), z.clone()).is_err());
        assert!(AmplitudeSeries::new(vec![0.0, 1.0, 2.0], vec![c(1.0); 3], vec![c(0.1); 3]).is_err());
        let s = AmplitudeSeries::new(vec![0.0, 1.0, 2.0], z.clone(), z).unwrap();
        assert_eq!(s.survival(), &[0.0, 0.0, 0.0]);
    }
}
