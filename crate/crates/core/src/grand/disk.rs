//! Disk-exterior grand canonical ensemble: particles on the circle
//! |z| = e^epsilon outside an ideal-conductor unit disk.
//!
//! The grand partition function is the Fredholm determinant det(1 + K) of
//! the kernel K f(z) = int f(zeta) e^{omega(zeta)} / (z conj(zeta) - 1)
//! d_mu(zeta); with the measure concentrated on the circle of radius
//! e^epsilon the denominator is bounded away from zero and the Nystrom
//! discretization on the periodic trapezoid grid converges spectrally.

use crate::canonical::xi;
use crate::error::{Error, Result};
use crate::linalg::logdet_complex;
use crate::logval::{relative_diff, LogValue};
use crate::times::TimeVector;
use nalgebra::DMatrix;
use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use super::nystrom::NystromGrid;
use super::FredholmResult;

/// Particles on |z| = e^epsilon with discrete 2D Toda time t0 and an overall
/// fugacity multiplier per particle.
#[derive(Clone, Debug)]
pub struct DiskEnsembleSpec {
    pub epsilon: f64,
    /// The 2D Toda discrete time n. Integer values are required for Hirota
    /// checks; evaluation itself accepts any real value since
    /// |z|^{2 t0} is single-valued on the circle.
    pub t0: f64,
    pub times: TimeVector,
    pub fugacity: f64,
}

impl DiskEnsembleSpec {
    pub fn new(epsilon: f64, t0: f64, times: TimeVector, fugacity: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::invalid(
                "disk ensemble requires epsilon > 0 (support off the conductor)",
            ));
        }
        Ok(DiskEnsembleSpec {
            epsilon,
            t0,
            times,
            fugacity,
        })
    }

    /// Chemical potential mu = 2 epsilon t0 - log(e^epsilon - e^{-epsilon}).
    /// Diverges to +infinity as epsilon -> 0+.
    pub fn chemical_potential(&self) -> f64 {
        chemical_potential(self.epsilon, self.t0)
    }
}

/// mu = 2 epsilon t0 - log(e^epsilon - e^{-epsilon}); +infinity at
/// epsilon <= 0 (the conductor touches the support).
pub fn chemical_potential(epsilon: f64, t0: f64) -> f64 {
    let gap = epsilon.exp() - (-epsilon).exp();
    if gap <= 0.0 {
        return f64::INFINITY;
    }
    2.0 * epsilon * t0 - gap.ln()
}

/// Harmonic background weight
/// omega(t; z) = t0 log|z|^2 + sum_k ( t_k (z^k - conj(z)^{-k}) - t_{-k} (conj(z)^k - z^{-k}) ).
///
/// Real for reality-locked times; fails on z = 0.
pub fn omega(spec: &DiskEnsembleSpec, z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::invalid("omega undefined at z = 0"));
    }
    let zc = z.conj();
    let zi = 1.0 / z;
    let zci = 1.0 / zc;
    let t = &spec.times;
    let acc = Complex64::new(spec.t0 * z.norm_sqr().ln(), 0.0);
    Ok(acc + xi(&t.plus, z) - xi(&t.plus, zci) - xi(&t.minus, zc) + xi(&t.minus, zi))
}

/// One-body potential on the circle, V(phi) = 2 sum_k sinh(epsilon k) t_k e^{i k phi}
/// (the k = 0 term vanishes; t0 enters through the chemical potential).
pub fn potential_v(spec: &DiskEnsembleSpec, phi: f64) -> Complex64 {
    let t = &spec.times;
    let mut acc = Complex64::new(0.0, 0.0);
    let k_max = t.plus.support().max(t.minus.support());
    for k in 1..=k_max {
        let sh = 2.0 * (spec.epsilon * k as f64).sinh();
        let e = Complex64::from_polar(1.0, k as f64 * phi);
        acc += sh * (t.plus.get(k) * e - t.minus.get(k) * e.conj());
    }
    acc
}

/// Kernel of the circle-supported Fredholm operator, including the arc
/// measure e^epsilon d_phi and the fugacity:
/// K(phi, phi') = fugacity e^epsilon e^{omega(zeta)} / (z conj(zeta) - 1)
/// with z = e^{epsilon + i phi}, zeta = e^{epsilon + i phi'}. The denominator
/// e^{2 epsilon} e^{i(phi - phi')} - 1 stays away from 0 for epsilon > 0.
pub fn fredholm_kernel_circle(spec: &DiskEnsembleSpec, phi: f64, phi_prime: f64) -> Complex64 {
    let zeta = Complex64::from_polar(spec.epsilon.exp(), phi_prime);
    let w = omega(spec, zeta).expect("zeta != 0 on the circle");
    let denom = Complex64::from_polar((2.0 * spec.epsilon).exp(), phi - phi_prime)
        - Complex64::new(1.0, 0.0);
    spec.fugacity * spec.epsilon.exp() * w.exp() / denom
}

/// The symmetrized Nystrom matrix W^{1/2} e^{omega/2} k e^{omega/2} W^{1/2}
/// (similar to the one-sided kernel, identical determinant, Hermitian for
/// reality-locked times).
fn nystrom_matrix(spec: &DiskEnsembleSpec, m: usize) -> Result<Vec<Complex64>> {
    let grid = NystromGrid::periodic_trapezoid(m)?;
    let e2 = (2.0 * spec.epsilon).exp();
    let half_omega: Vec<Complex64> = grid
        .nodes
        .iter()
        .map(|&phi| {
            let zeta = Complex64::from_polar(spec.epsilon.exp(), phi);
            Ok((omega(spec, zeta)? * 0.5).exp())
        })
        .collect::<Result<_>>()?;
    let scale = spec.fugacity * spec.epsilon.exp();
    let mut a = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        for j in 0..m {
            let denom = Complex64::from_polar(e2, grid.nodes[i] - grid.nodes[j])
                - Complex64::new(1.0, 0.0);
            a[i * m + j] = (grid.weights[i] * grid.weights[j]).sqrt() * scale * half_omega[i]
                * half_omega[j]
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

/// Fredholm determinant det(1 + K) on an M-node periodic trapezoid grid,
/// reported with its M -> 2M refinement delta. `converged` flags whether the
/// delta certifies the value at 1e-8.
pub fn fredholm_det_circle(spec: &DiskEnsembleSpec, m: usize) -> Result<FredholmResult> {
    if m < 8 {
        return Err(Error::invalid("need at least 8 nodes"));
    }
    if spec.fugacity == 0.0 {
        return Ok(FredholmResult {
            value: LogValue::one(),
            refinement_delta: 0.0,
            truncation_estimate: 0.0,
            converged: true,
        });
    }
    let coarse = logdet_one_plus(nystrom_matrix(spec, m)?, m);
    let fine = logdet_one_plus(nystrom_matrix(spec, 2 * m)?, 2 * m);
    let delta = relative_diff(&coarse, &fine, 1e-300);
    Ok(FredholmResult {
        value: coarse,
        refinement_delta: delta,
        truncation_estimate: 0.0,
        converged: delta < 1e-8,
    })
}

/// Certified bound on the dropped tail sum_{N > n_kept} |d_N| of the
/// Fredholm expansion det(1 + K) = sum_N d_N: the elementary symmetric
/// functions of the eigenvalues are dominated by those of the singular
/// values, and e_N(sigma) <= S1^N / N! with S1 the trace norm, so the tail
/// is bounded by the tail of e^{S1}.
pub fn fredholm_series_remainder_bound(
    spec: &DiskEnsembleSpec,
    m: usize,
    n_kept: u32,
) -> Result<f64> {
    let a = nystrom_matrix(spec, m)?;
    let mat = DMatrix::from_fn(m, m, |i, j| a[i * m + j]);
    let svd = mat.svd(false, false);
    let s1: f64 = svd.singular_values.iter().sum();
    let mut partial = 0.0;
    let mut term = 1.0f64;
    for n in 0..=n_kept {
        if n > 0 {
            term *= s1 / f64::from(n);
        }
        partial += term;
    }
    Ok((s1.exp() - partial).max(0.0))
}

/// The N = 0..=n_max terms of the grand canonical expansion
///
/// ```text
/// Z_N-term = fugacity^N e^{mu N} / N! int..int prod_{j<k}
///            |sin((phi_j - phi_k)/2) / sin((phi_j - phi_k + 2 i epsilon)/2)|^2
///            prod_l e^{V(phi_l)} d phi_l,
/// ```
///
/// by M^N tensor-grid trapezoid quadrature of the product form. This is the
/// independent expansion oracle for [`fredholm_det_circle`]; the product
/// form never touches the kernel.
pub fn grand_expansion_circle(
    spec: &DiskEnsembleSpec,
    n_max: u32,
    m: usize,
) -> Result<Vec<LogValue>> {
    if n_max > 5 {
        return Err(Error::invalid("expansion terms limited to N <= 5"));
    }
    if (m as f64).powi(n_max as i32) > 5e7 {
        return Err(Error::invalid("tensor grid too large for this N, M"));
    }
    let grid = NystromGrid::periodic_trapezoid(m)?;
    let mu = spec.chemical_potential();
    let ev: Vec<Complex64> = grid
        .nodes
        .iter()
        .map(|&phi| potential_v(spec, phi).exp())
        .collect();
    // pair factor |sin(d/2)|^2 / |sin((d + 2 i eps)/2)|^2
    let mut pair = vec![0.0f64; m * m];
    for i in 0..m {
        for j in 0..m {
            let d = grid.nodes[i] - grid.nodes[j];
            let num = (d / 2.0).sin().powi(2);
            let den = Complex64::new(d / 2.0, spec.epsilon).sin().norm_sqr();
            pair[i * m + j] = num / den;
        }
    }
    let w = grid.weights[0];

    let mut terms = Vec::with_capacity(n_max as usize + 1);
    terms.push(LogValue::one());
    for n in 1..=n_max {
        let nn = n as usize;
        let mut idx = vec![0usize; nn];
        let mut sum = Complex64::new(0.0, 0.0);
        loop {
            let mut t = Complex64::new(1.0, 0.0);
            for a in 0..nn {
                t *= ev[idx[a]];
                for b in (a + 1)..nn {
                    t *= pair[idx[a] * m + idx[b]];
                }
            }
            sum += t;
            let mut k = 0usize;
            loop {
                if k == nn {
                    break;
                }
                idx[k] += 1;
                if idx[k] < m {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == nn {
                break;
            }
        }
        let ln_prefactor = f64::from(n) * (mu + spec.fugacity.abs().ln() + w.ln())
            - ln_gamma(f64::from(n) + 1.0);
        let mut term = LogValue::from_ln(ln_prefactor).mul(&LogValue::from_complex(sum));
        if spec.fugacity < 0.0 && n % 2 == 1 {
            term = term.neg();
        }
        terms.push(term);
    }
    Ok(terms)
}

/// Image-charge Boltzmann factor of a disk-exterior configuration (without
/// the background weight e^W):
/// prod_{j<k} |(z_j - z_k)/(z_j conj(z_k) - 1)|^2 prod_l |z_l|/(|z_l|^2 - 1).
pub fn image_energy_weight(zs: &[Complex64]) -> Result<f64> {
    for &z in zs {
        if z.norm() <= 1.0 {
            return Err(Error::invalid(
                "image weight diverges on or inside the unit circle",
            ));
        }
    }
    let mut w = 1.0f64;
    for (j, &zj) in zs.iter().enumerate() {
        w *= zj.norm() / (zj.norm_sqr() - 1.0);
        for &zk in zs.iter().skip(j + 1) {
            w *= (zj - zk).norm_sqr() / (zj * zk.conj() - 1.0).norm_sqr();
        }
    }
    Ok(w)
}

/// The bare 2D Toda tau-function of the disk ensemble at discrete time n:
/// tau_n = e^{-sum_k k t_k t_{-k}} det(1 + K) with t0 = n. This is the
/// normalization the Hirota identity applies to; the determinant itself is
/// the grand partition function.
pub fn fredholm_circle_family(
    epsilon: f64,
    fugacity: f64,
    m: usize,
) -> impl Fn(i64, &TimeVector) -> Result<LogValue> {
    move |n, t| {
        let spec = DiskEnsembleSpec::new(epsilon, n as f64, t.clone(), fugacity)?;
        let det = fredholm_det_circle(&spec, m)?;
        let cross = t.cross_term();
        Ok(LogValue::from_ln_and_phase(-cross.re, -cross.im).mul(&det.value))
    }
}
