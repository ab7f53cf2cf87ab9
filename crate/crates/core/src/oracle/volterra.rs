//! Direct time stepping of the coupled integro-differential amplitude
//! equations
//!
//! ```text
//! dc_j/dt = -alpha_j M(t),   M(t) = int_0^t f(t - s) [alpha_1 c_1(s) + alpha_2 c_2(s)] ds
//! ```
//!
//! with the exponential kernel `f(tau) = W^2 exp(-kappa tau)`,
//! `kappa = lambda + i delta`. The collective drive `A = alpha_1 c_1 + alpha_2 c_2`
//! is interpolated linearly inside each step; against that interpolant both the
//! memory update `M(t + h) = e^{-kappa h} M(t) + ...` and the step integral of
//! `M` are evaluated exactly (product integration). The scheme is implicit in
//! `A(t + h)`, which enters linearly and is solved for in closed form. Global
//! error is second order in `h`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::SolverGrid;
use crate::model::{AmplitudeSeries, CouplingConfig, InitialAmplitudes, LorentzianSpectrum};

/// Upper bound on `h (lambda + |delta|)`.
pub const MAX_STIFFNESS: f64 = 0.5;

/// `m_k(z) = int_0^1 y^k e^{-z y} dy` for `k = 0, 1, 2`.
pub(crate) fn exponential_moments(z: Complex64) -> [Complex64; 3] {
    if z.norm() <= 1.0 {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        // (-z)^j / j!
        let mut power = Complex64::new(1.0, 0.0);
        for j in 0..32 {
            for (k, m) in out.iter_mut().enumerate() {
                *m += power / (j + k + 1) as f64;
            }
            power *= -z / (j + 1) as f64;
        }
        out
    } else {
        let e = (-z).exp();
        let m0 = (1.0 - e) / z;
        let m1 = (m0 - e) / z;
        let m2 = (2.0 * m1 - e) / z;
        [m0, m1, m2]
    }
}

/// Per-step weights of the product-integration scheme.
#[derive(Debug, Clone, Copy)]
struct StepWeights {
    decay: Complex64,
    // memory update: M' = decay M + w2 h (A g_old + A' g_new)
    g_old: Complex64,
    g_new: Complex64,
    // step integral of M: h (M e_mem + w2 h (A q_old + A' q_new))
    e_mem: Complex64,
    q_old: Complex64,
    q_new: Complex64,
}

impl StepWeights {
    fn new(kappa: Complex64, h: f64) -> Self {
        let z = kappa * h;
        let [m0, m1, m2] = exponential_moments(z);
        let q_new = 0.5 * (m0 - 2.0 * m1 + m2);
        Self {
            decay: (-z).exp(),
            g_old: m1,
            g_new: m0 - m1,
            e_mem: m0,
            q_old: (m0 - m1) - q_new,
            q_new,
        }
    }
}

pub fn volterra_solve(
    spectrum: &LorentzianSpectrum,
    coupling: &CouplingConfig,
    init: &InitialAmplitudes,
    grid: &SolverGrid,
) -> Result<AmplitudeSeries> {
    let h = grid.step();
    let stiffness = h * (spectrum.half_width() + spectrum.detuning().abs());
    if stiffness > MAX_STIFFNESS {
        return Err(Error::StepTooLarge {
            scheme: "volterra",
            step: h,
            product: stiffness,
            limit: MAX_STIFFNESS,
        });
    }

    let kappa = spectrum.kernel_exponent();
    let w2 = spectrum.transition_strength().powi(2);
    let (a1, a2) = (coupling.alpha1(), coupling.alpha2());
    let n2 = a1 * a1 + a2 * a2;
    let wts = StepWeights::new(kappa, h);

    let times = grid.times();
    let mut c1 = Vec::with_capacity(times.len());
    let mut c2 = Vec::with_capacity(times.len());
    let (mut x1, mut x2) = (init.c10(), init.c20());
    let mut memory = Complex64::new(0.0, 0.0);
    c1.push(x1);
    c2.push(x2);

    for _ in 0..grid.steps() {
        let drive = a1 * x1 + a2 * x2;
        // Step integral of M is `known + slope * drive_next`.
        let known = h * (memory * wts.e_mem + w2 * h * drive * wts.q_old);
        let slope = w2 * h * h * wts.q_new;
        let drive_next = (drive - n2 * known) / (1.0 + n2 * slope);
        let integral = known + slope * drive_next;

        x1 -= a1 * integral;
        x2 -= a2 * integral;
        let drive_next = a1 * x1 + a2 * x2;
        memory = wts.decay * memory + w2 * h * (drive * wts.g_old + drive_next * wts.g_new);

        c1.push(x1);
        c2.push(x2);
    }
    AmplitudeSeries::new(times, c1, c2)
}
