//! Half-plane grand canonical ensemble: particles on the line Im z = epsilon
//! above an ideal conductor filling the lower half-plane (KP reduction).
//!
//! The N-term expansion pairs each particle with its image at conj(z); the
//! determinant kernel on the line x + i epsilon is
//!
//! ```text
//! K(x, x') = damping(x') e^{xi(t, x'+i eps) - xi(t, x'-i eps)} / (-i (x - x' + 2 i eps)),
//! ```
//!
//! whose normalization is fixed by matching the first-order term to the
//! 1/(2 Im z) factor of the expansion: -i(x - x + 2 i eps) = 2 eps on the
//! diagonal. Gauss-Legendre nodes on [-L, L] discretize the line; the
//! damping envelope makes the window truncation quantifiable.

use crate::canonical::xi;
use crate::error::{Error, Result};
use crate::linalg::logdet_complex;
use crate::logval::{relative_diff, LogValue};
use crate::times::HalfTimeVector;
use num_complex::Complex64;
use std::sync::Arc;

use super::nystrom::NystromGrid;
use super::FredholmResult;

/// Ensemble on the line Im z = epsilon with a damping envelope cutting the
/// line off at half-width `window`.
#[derive(Clone)]
pub struct HalfPlaneEnsembleSpec {
    pub epsilon: f64,
    /// KP times t_1, t_2, ...; purely imaginary when `imaginary_locked`.
    pub times: HalfTimeVector,
    pub imaginary_locked: bool,
    /// Half-width L of the truncated line [-L, L].
    pub window: f64,
    /// Integrable envelope multiplying the line measure.
    pub damping: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for HalfPlaneEnsembleSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HalfPlaneEnsembleSpec")
            .field("epsilon", &self.epsilon)
            .field("times", &self.times)
            .field("imaginary_locked", &self.imaginary_locked)
            .field("window", &self.window)
            .finish()
    }
}

impl HalfPlaneEnsembleSpec {
    /// Default window L = 10 epsilon with the Gaussian envelope
    /// exp(-x^2 / (2 L^2 / 9)), which has decayed to e^{-4.5} at the edge.
    pub fn new(epsilon: f64, times: HalfTimeVector, imaginary_locked: bool) -> Result<Self> {
        let window = 10.0 * epsilon;
        Self::with_window(epsilon, times, imaginary_locked, window)
    }

    pub fn with_window(
        epsilon: f64,
        times: HalfTimeVector,
        imaginary_locked: bool,
        window: f64,
    ) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::invalid("half-plane ensemble requires epsilon > 0"));
        }
        if !(window > 0.0) {
            return Err(Error::invalid("window half-width must be positive"));
        }
        if imaginary_locked {
            for k in 1..=times.support() {
                if times.get(k).re.abs() > 1e-12 {
                    return Err(Error::invalid(
                        "imaginary-locked times must be purely imaginary",
                    ));
                }
            }
        }
        let sigma_sq = window * window / 9.0;
        Ok(HalfPlaneEnsembleSpec {
            epsilon,
            times,
            imaginary_locked,
            window,
            damping: Arc::new(move |x: f64| (-x * x / (2.0 * sigma_sq)).exp()),
        })
    }

    pub fn with_damping(mut self, damping: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.damping = Arc::new(damping);
        self
    }

    /// One-body weight exponent xi(t, x + i eps) - xi(t, x - i eps); real
    /// for purely imaginary times.
    pub fn weight_exponent(&self, x: f64) -> Complex64 {
        let z = Complex64::new(x, self.epsilon);
        xi(&self.times, z) - xi(&self.times, z.conj())
    }
}

/// Nystrom determinant of 1 + K on Gauss-Legendre nodes, with the window
/// truncation estimate (damping tail beyond L over the kernel scale 2 eps)
/// carried alongside the M -> 2M refinement delta.
pub fn fredholm_det_halfplane(spec: &HalfPlaneEnsembleSpec, m: usize) -> Result<FredholmResult> {
    if m < 16 {
        return Err(Error::invalid("need at least 16 nodes"));
    }
    let coarse = halfplane_matrix(spec, m)?;
    let fine = halfplane_matrix(spec, 2 * m)?;
    let det_coarse = logdet_one_plus(coarse, m);
    let det_fine = logdet_one_plus(fine, 2 * m);
    let delta = relative_diff(&det_coarse, &det_fine, 1e-300);

    // tail of the damping envelope beyond the window, integrated crudely on
    // [L, 4L] (the envelope is assumed monotone out there), over 2 eps
    let l = spec.window;
    let steps = 400;
    let h = 3.0 * l / steps as f64;
    let mut tail = 0.0;
    for j in 0..steps {
        let x = l + (j as f64 + 0.5) * h;
        tail += (spec.damping)(x) * h;
    }
    let mut max_weight: f64 = 0.0;
    for j in 0..=32 {
        let x = -l + 2.0 * l * j as f64 / 32.0;
        max_weight = max_weight.max(spec.weight_exponent(x).re.exp());
    }
    let truncation_estimate = 2.0 * tail * max_weight / (2.0 * spec.epsilon);
    // measured against the one-particle scale: a grotesquely short window is
    // flagged, while the default 3-sigma Gaussian cut (relative tail ~ 1e-3)
    // still counts as a usable, self-described approximation of the full line
    let trace_scale = halfplane_first_order(spec, m)?.norm().max(1.0);

    Ok(FredholmResult {
        value: det_coarse,
        refinement_delta: delta,
        truncation_estimate,
        converged: delta < 1e-8 && truncation_estimate < 0.05 * trace_scale,
    })
}

/// Trace of the discretized kernel: the first-order term of the fugacity
/// expansion, int damping(x) e^{xi - bar xi} / (2 eps) dx on the grid.
pub fn halfplane_first_order(spec: &HalfPlaneEnsembleSpec, m: usize) -> Result<Complex64> {
    let grid = NystromGrid::gauss_legendre(m, -spec.window, spec.window)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (&x, &w) in grid.nodes.iter().zip(&grid.weights) {
        let q = (spec.damping)(x) * spec.weight_exponent(x).exp() / (2.0 * spec.epsilon);
        acc += w * q;
    }
    Ok(acc)
}

fn halfplane_matrix(spec: &HalfPlaneEnsembleSpec, m: usize) -> Result<Vec<Complex64>> {
    let grid = NystromGrid::gauss_legendre(m, -spec.window, spec.window)?;
    // one-sided weight q(x) = damping(x) e^{Delta xi(x)}, symmetrized with
    // principal square roots (determinant unchanged)
    let half_q: Vec<Complex64> = grid
        .nodes
        .iter()
        .map(|&x| {
            let e = spec.weight_exponent(x);
            if spec.imaginary_locked {
                debug_assert!(
                    e.im.abs() < 1e-12 * (1.0 + e.norm()),
                    "imaginary-locked weight must be real"
                );
            }
            let d = (spec.damping)(x);
            (0.5 * e).exp() * d.sqrt()
        })
        .collect();
    let mut a = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        for j in 0..m {
            let denom = Complex64::new(0.0, -1.0)
                * Complex64::new(grid.nodes[i] - grid.nodes[j], 2.0 * spec.epsilon);
            a[i * m + j] = (grid.weights[i] * grid.weights[j]).sqrt() * half_q[i] * half_q[j]
                / denom;
        }
    }
    Ok(a)
}

fn logdet_one_plus(mut a: Vec<Complex64>, m: usize) -> LogValue {
    for i in 0..m {
        a[i * m + i] += 1.0;
    }
    logdet_complex(&mut a, m)
}
