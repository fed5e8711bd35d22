//! Circle-supported measures: symbol Fourier coefficients and the Toeplitz
//! determinant form of the tau-function.

use crate::canonical::xi;
use crate::error::{Error, Result};
use crate::linalg::logdet_complex;
use crate::logval::LogValue;
use crate::times::TimeVector;
use num_complex::Complex64;
use rustfft::FftPlanner;
use statrs::function::gamma::ln_gamma;

/// Symbol phi(theta) = exp(xi(t_+, e^{i theta}) - xi(t_-, e^{-i theta})).
fn symbol(t: &TimeVector, theta: f64) -> Complex64 {
    let z = Complex64::from_polar(1.0, theta);
    (xi(&t.plus, z) - xi(&t.minus, z.conj())).exp()
}

fn validate_grid(t: &TimeVector, n_grid: usize, matrix_size: usize) -> Result<()> {
    if !n_grid.is_power_of_two() || n_grid < 4 {
        return Err(Error::invalid("n_grid must be a power of two >= 4"));
    }
    let support = t.plus.support().max(t.minus.support());
    if n_grid < 4 * (support + matrix_size) {
        return Err(Error::invalid(format!(
            "n_grid = {n_grid} too small: need at least 4*(support + size) = {}",
            4 * (support + matrix_size)
        )));
    }
    Ok(())
}

/// All Fourier coefficients of the symbol on an n_grid-point uniform grid,
/// c_k = (1/2 pi) int phi(theta) e^{-i k theta} d theta (trapezoid rule,
/// spectrally accurate for entire symbols). Index k in -n/2 < k <= n/2 maps
/// to position k mod n_grid.
///
/// The aliasing guard requires the tail band of coefficients to have decayed
/// below 1e-13 relative to the largest one.
pub fn symbol_fourier_coeffs(t: &TimeVector, n_grid: usize) -> Result<Vec<Complex64>> {
    validate_grid(t, n_grid, 1)?;
    let mut buf: Vec<Complex64> = (0..n_grid)
        .map(|m| symbol(t, 2.0 * std::f64::consts::PI * m as f64 / n_grid as f64))
        .collect();
    FftPlanner::new().plan_fft_forward(n_grid).process(&mut buf);
    for v in buf.iter_mut() {
        *v /= n_grid as f64;
    }
    let max_mag = buf.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let tail_lo = 3 * n_grid / 8;
    let tail_hi = 5 * n_grid / 8;
    let tail_max = buf[tail_lo..=tail_hi.min(n_grid - 1)]
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if tail_max > 1e-13 * max_mag.max(1.0) {
        return Err(Error::NotConverged(format!(
            "symbol tail coefficients not decayed: {tail_max:.3e} (n_grid = {n_grid})"
        )));
    }
    Ok(buf)
}

/// k-th Fourier coefficient of the symbol (negative k allowed).
pub fn symbol_fourier(t: &TimeVector, k: i64, n_grid: usize) -> Result<Complex64> {
    let coeffs = symbol_fourier_coeffs(t, n_grid)?;
    let half = (n_grid / 2) as i64;
    if k.abs() > half {
        return Err(Error::invalid("requested coefficient beyond n_grid/2"));
    }
    let idx = k.rem_euclid(n_grid as i64) as usize;
    Ok(coeffs[idx])
}

/// Tau-function of the circle-supported measure as the N x N Toeplitz
/// determinant of the symbol coefficients, det [c_{j-k}], in log form.
///
/// N = 0 gives 1 (empty determinant); N < 0 gives the zero value, matching
/// the vanishing of the 2D Toda tau-function below the vacuum.
pub fn tau_toeplitz(n: i64, t: &TimeVector, n_grid: usize) -> Result<LogValue> {
    if n < 0 {
        return Ok(LogValue::zero());
    }
    let n = n as usize;
    if n == 0 {
        return Ok(LogValue::one());
    }
    validate_grid(t, n_grid, n)?;
    let coeffs = symbol_fourier_coeffs(t, n_grid)?;
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..n {
            let idx = (j as i64 - k as i64).rem_euclid(n_grid as i64) as usize;
            m[j * n + k] = coeffs[idx];
        }
    }
    Ok(logdet_complex(&mut m, n))
}

/// Direct N-fold tensor-grid trapezoid quadrature of the contour-integral
/// form
///
/// ```text
/// tau_N = (1/N!) oint..oint prod_{j<k} (z_j - z_k)(1/z_j - 1/z_k)
///         prod_l exp(xi(t_+, z_l) - xi(t_-, 1/z_l)) dz_l/(2 pi i z_l),
/// ```
///
/// the slow independent route the Toeplitz determinant is checked against.
/// Cost is nodes^N; intended for N <= 3.
pub fn tau_unitary_quadrature(n: u32, t: &TimeVector, nodes: usize) -> Result<LogValue> {
    if n == 0 {
        return Ok(LogValue::one());
    }
    if nodes < 4 {
        return Err(Error::invalid("need at least 4 quadrature nodes"));
    }
    if nodes.pow(n) > 20_000_000 {
        return Err(Error::invalid(
            "tensor quadrature too large; reduce N or nodes",
        ));
    }
    let zs: Vec<Complex64> = (0..nodes)
        .map(|m| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * m as f64 / nodes as f64))
        .collect();
    let phis: Vec<Complex64> = (0..nodes)
        .map(|m| symbol(t, 2.0 * std::f64::consts::PI * m as f64 / nodes as f64))
        .collect();
    // pair factor (z_a - z_b)(1/z_a - 1/z_b)
    let pair: Vec<Complex64> = (0..nodes * nodes)
        .map(|i| {
            let (a, b) = (i / nodes, i % nodes);
            (zs[a] - zs[b]) * (1.0 / zs[a] - 1.0 / zs[b])
        })
        .collect();

    let nn = n as usize;
    let mut idx = vec![0usize; nn];
    let mut sum = Complex64::new(0.0, 0.0);
    loop {
        let mut term = Complex64::new(1.0, 0.0);
        for a in 0..nn {
            term *= phis[idx[a]];
            for b in (a + 1)..nn {
                term *= pair[idx[a] * nodes + idx[b]];
            }
        }
        sum += term;
        let mut k = 0usize;
        loop {
            if k == nn {
                let ln_norm =
                    -ln_gamma(f64::from(n) + 1.0) - f64::from(n) * (nodes as f64).ln();
                return Ok(LogValue::from_ln(ln_norm).mul(&LogValue::from_complex(sum)));
            }
            idx[k] += 1;
            if idx[k] < nodes {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logval::relative_diff;
    use crate::times::HalfTimeVector;
    use approx::assert_relative_eq;

    /// Slow independent oracle: k-th angular Fourier coefficient by plain
    /// midpoint quadrature on a non-power-of-two grid.
    fn coeff_oracle(t: &TimeVector, k: i64, nodes: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..nodes {
            let theta = 2.0 * std::f64::consts::PI * (m as f64 + 0.5) / nodes as f64;
            acc += symbol(t, theta) * Complex64::from_polar(1.0, -(k as f64) * theta);
        }
        acc / nodes as f64
    }

    #[test]
    fn trivial_symbol_coefficients() {
        let t = TimeVector::zero();
        assert_relative_eq!(
            symbol_fourier(&t, 0, 16).unwrap().re,
            1.0,
            epsilon = 1e-14
        );
        for k in [-3i64, -1, 1, 5] {
            assert!(symbol_fourier(&t, k, 16).unwrap().norm() < 1e-14);
        }
    }

    #[test]
    fn coefficients_are_modified_bessel_for_real_symmetric_times() {
        // t1 = a, t_{-1} = -a: symbol exp(2a cos theta), c_k = I_k(2a).
        let a = 0.4;
        let t = TimeVector::reality_locked(HalfTimeVector::from_real(&[a]));
        for k in 0..4i64 {
            let oracle = coeff_oracle(&t, k, 4001);
            let fast = symbol_fourier(&t, k, 64).unwrap();
            assert!((fast - oracle).norm() < 1e-12, "k={k}");
            // symmetry c_k = c_{-k}
            let neg = symbol_fourier(&t, -k, 64).unwrap();
            assert!((fast - neg).norm() < 1e-13);
        }
    }

    #[test]
    fn toeplitz_identity_at_zero_times() {
        let t = TimeVector::zero();
        for n in [1i64, 3, 7] {
            let v = tau_toeplitz(n, &t, 64).unwrap();
            assert!(v.log_magnitude.abs() < 1e-12, "n={n}");
        }
        assert!(tau_toeplitz(-2, &t, 64).unwrap().is_zero());
        assert!(tau_toeplitz(0, &t, 64).unwrap().log_magnitude == 0.0);
    }

    #[test]
    fn n1_equals_bessel_i0_by_quadrature() {
        let a = 0.3;
        let t = TimeVector::reality_locked(HalfTimeVector::from_real(&[a]));
        let i0 = coeff_oracle(&t, 0, 4001); // I_0(2a) by direct quadrature
        let tau = tau_toeplitz(1, &t, 64).unwrap();
        assert_relative_eq!(tau.log_magnitude, i0.re.ln(), epsilon = 1e-12);
    }

    #[test]
    fn toeplitz_matches_tensor_quadrature() {
        let t = TimeVector::reality_locked(HalfTimeVector::new(vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.08, 0.05),
        ]));
        for n in [2i64, 3] {
            let det = tau_toeplitz(n, &t, 128).unwrap();
            let quad = tau_unitary_quadrature(n as u32, &t, 64).unwrap();
            let d = relative_diff(&det, &quad, 1e-300);
            assert!(d < 1e-6, "n={n}: rel diff {d}");
        }
    }

    #[test]
    fn aliasing_guard_rejects_small_grids() {
        // A large time makes the symbol sharply peaked; 16 nodes cannot
        // resolve it and the tail check must fire before silent aliasing.
        let t = TimeVector::reality_locked(HalfTimeVector::from_real(&[4.0]));
        match symbol_fourier_coeffs(&t, 16) {
            Err(Error::NotConverged(_)) => {}
            other => panic!("expected tail-decay failure, got {other:?}"),
        }
        assert!(symbol_fourier_coeffs(&t, 256).is_ok());
    }

    #[test]
    fn grid_validation() {
        let t = TimeVector::zero();
        assert!(symbol_fourier(&t, 0, 12).is_err()); // not a power of two
        assert!(tau_toeplitz(5, &t, 16).is_err()); // 16 < 4*(0+5)
    }
}
