//! Canonical-ensemble tau-functions.
//!
//! The canonical partition function of N particles with measure d_mu and
//! times (t_+, t_-),
//!
//! ```text
//! tau_N = (1/N!) int |Delta_N(z)|^2 prod_l exp(xi(t_+, z_l) - xi(t_-, conj z_l)) d_mu(z_l),
//! ```
//!
//! is evaluated here along three independent routes: the Schur-function
//! expansion for the radial Gaussian measure ([`tau_gaussian_schur`]), the
//! Toeplitz determinant for circle-supported measures ([`tau_toeplitz`]),
//! and importance-sampled Monte Carlo / exhaustive summation directly on the
//! N-fold integral ([`tau_integral_mc`]). A finite-difference checker for
//! the lowest Hirota bilinear identity ([`hirota_residual`]) certifies that
//! each family behaves as a 2D Toda tau-function.

mod hirota;
mod monte_carlo;
mod toeplitz;

pub use hirota::{gaussian_family, hirota_residual, toeplitz_family, HirotaOutcome};
pub use monte_carlo::{partition_zn, tau_integral_mc, McEstimate};
pub use toeplitz::{symbol_fourier, symbol_fourier_coeffs, tau_toeplitz, tau_unitary_quadrature};

use crate::error::{Error, Result};
use crate::logval::LogValue;
use crate::schur::{enumerate_partitions_bounded, pochhammer_ln, schur};
use crate::times::{HalfTimeVector, TimeVector};
use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

/// xi(t, z) = sum_{k>=1} t_k z^k over the support of t.
pub fn xi(t: &HalfTimeVector, z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zp = Complex64::new(1.0, 0.0);
    for k in 1..=t.support() {
        zp *= z;
        acc += t.get(k) * zp;
    }
    acc
}

/// Radial Gaussian moment h_n = int |z|^{2n} exp(-c|z|^2) d^2z
/// = pi c^{-n-1} n!, returned in log form.
pub fn gaussian_moment_h(n: u32, c: f64) -> Result<LogValue> {
    if !(c > 0.0) {
        return Err(Error::invalid("gaussian_moment_h requires c > 0"));
    }
    let ln = std::f64::consts::PI.ln() - f64::from(n + 1) * c.ln() + ln_gamma(f64::from(n) + 1.0);
    Ok(LogValue::from_ln(ln))
}

/// Result of a truncated Schur-expansion evaluation.
#[derive(Clone, Copy, Debug)]
pub struct SchurTau {
    pub value: LogValue,
    /// |sum over the top weight shell| / |total sum|: a truncation
    /// diagnostic, not a rigorous bound (the convergence domain of the
    /// expansion in the times is not known).
    pub last_shell_rel: f64,
}

/// Gaussian-measure tau-function via its Schur expansion
///
/// ```text
/// tau_N = pi^N c^{-N(N+1)/2} prod_{k=1}^N Gamma(k)
///         * sum_lambda c^{-|lambda|} (N)_lambda s_lambda(t_+) s_lambda(-t_-),
/// ```
///
/// truncated to |lambda| <= cutoff. Diagrams with more than N rows drop out
/// through (N)_lambda = 0. Negative N gives the zero value (tau_N = 0 at
/// N < 0); N = 0 gives 1.
pub fn tau_gaussian_schur(n: i64, c: f64, t: &TimeVector, cutoff: u32) -> Result<SchurTau> {
    if !(c > 0.0) {
        return Err(Error::invalid("tau_gaussian_schur requires c > 0"));
    }
    if n < 0 {
        return Ok(SchurTau {
            value: LogValue::zero(),
            last_shell_rel: 0.0,
        });
    }
    let minus_neg = t.minus.negated();
    let ln_c = c.ln();
    let mut total = Complex64::new(0.0, 0.0);
    let mut shell = Complex64::new(0.0, 0.0);
    for lambda in enumerate_partitions_bounded(cutoff, n.min(cutoff as i64) as usize) {
        let ln_poch = pochhammer_ln(&lambda, n)?;
        if ln_poch == f64::NEG_INFINITY {
            continue;
        }
        let s_product = schur(&lambda, &t.plus) * schur(&lambda, &minus_neg);
        if s_product == Complex64::new(0.0, 0.0) {
            continue;
        }
        let weight = lambda.weight();
        let term = (ln_poch - f64::from(weight) * ln_c).exp() * s_product;
        total += term;
        if weight == cutoff {
            shell += term;
        }
    }
    let prefactor_ln = (n as f64) * std::f64::consts::PI.ln()
        - (n as f64) * ((n + 1) as f64) / 2.0 * ln_c
        + (1..=n).map(|k| ln_gamma(k as f64)).sum::<f64>();
    let value = LogValue::from_ln(prefactor_ln).mul(&LogValue::from_complex(total));
    let last_shell_rel = if total.norm() > 0.0 {
        shell.norm() / total.norm()
    } else {
        0.0
    };
    Ok(SchurTau {
        value,
        last_shell_rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur::{enumerate_partitions, pochhammer};
    use crate::times::HalfTimeVector;
    use approx::assert_relative_eq;

    #[test]
    fn xi_values() {
        assert_eq!(
            xi(&HalfTimeVector::zero(), Complex64::new(2.0, 3.0)),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(
            xi(&HalfTimeVector::from_real(&[1.0]), Complex64::new(2.0, 0.0)),
            Complex64::new(2.0, 0.0)
        );
        // 0.3(1+i) - 0.1(1+i)^2 = 0.3 + 0.3i - 0.2i = 0.3 + 0.1i
        let t = HalfTimeVector::from_real(&[0.3, -0.1]);
        let v = xi(&t, Complex64::new(1.0, 1.0));
        assert_relative_eq!(v.re, 0.3, epsilon = 1e-15);
        assert_relative_eq!(v.im, 0.1, epsilon = 1e-15);
    }

    /// Radial quadrature oracle for h_n = 2 pi int r^{2n+1} exp(-c r^2) dr.
    fn h_oracle(n: u32, c: f64) -> f64 {
        let r_max = (60.0 / c).sqrt();
        let steps = 400_000;
        let dr = r_max / steps as f64;
        let mut acc = 0.0;
        for i in 0..steps {
            let r = (i as f64 + 0.5) * dr;
            acc += r.powi(2 * n as i32 + 1) * (-c * r * r).exp();
        }
        2.0 * std::f64::consts::PI * acc * dr
    }

    #[test]
    fn gaussian_moments() {
        let pi = std::f64::consts::PI;
        assert_relative_eq!(
            gaussian_moment_h(0, 1.0).unwrap().log_magnitude,
            pi.ln(),
            epsilon = 1e-14
        );
        assert_relative_eq!(
            gaussian_moment_h(2, 1.0).unwrap().log_magnitude,
            (2.0 * pi).ln(),
            epsilon = 1e-14
        );
        // quadrature confirms pi * 2^{-2} * 1! at n=1, c=2
        let oracle = h_oracle(1, 2.0);
        assert_relative_eq!(oracle, pi / 4.0, epsilon = 1e-8);
        assert_relative_eq!(
            gaussian_moment_h(1, 2.0).unwrap().log_magnitude,
            oracle.ln(),
            epsilon = 1e-8
        );
        assert!(gaussian_moment_h(0, 0.0).is_err());
    }

    #[test]
    fn schur_tau_closed_form_at_zero_times() {
        let pi = std::f64::consts::PI;
        let t = TimeVector::zero();
        // tau_0 = 1
        let tau0 = tau_gaussian_schur(0, 1.0, &t, 4).unwrap();
        assert_relative_eq!(tau0.value.log_magnitude, 0.0, epsilon = 1e-14);
        // tau_2 = pi^2 at c = 1
        let tau2 = tau_gaussian_schur(2, 1.0, &t, 6).unwrap();
        assert_relative_eq!(tau2.value.log_magnitude, 2.0 * pi.ln(), epsilon = 1e-13);
        assert_eq!(tau2.value.phase, 0.0);
        // tau_N = 0 for N < 0
        assert!(tau_gaussian_schur(-1, 1.0, &t, 4).unwrap().value.is_zero());
    }

    #[test]
    fn scaling_covariance_in_c() {
        // Explicit c-dependence: prefactor c^{-N(N+1)/2}, term weight
        // c^{-|lambda|}. Evaluate at c and 2c and compare the rescaled sums.
        let t = TimeVector::reality_locked(HalfTimeVector::new(vec![
            Complex64::new(0.15, 0.1),
            Complex64::new(-0.05, 0.08),
        ]));
        let n = 3i64;
        let cutoff = 10u32;
        let (c1, c2) = (1.0, 2.0);
        let tau_c1 = tau_gaussian_schur(n, c1, &t, cutoff).unwrap().value;
        let tau_c2 = tau_gaussian_schur(n, c2, &t, cutoff).unwrap().value;

        // Rebuild tau(c2) from scratch with the c-dependence factored out:
        // sum_lambda (c2/c1)^{-|lambda|} * term_lambda(c1).
        let minus_neg = t.minus.negated();
        let mut rescaled = Complex64::new(0.0, 0.0);
        for lambda in enumerate_partitions(cutoff) {
            if lambda.num_rows() as i64 > n {
                continue;
            }
            let poch = pochhammer(&lambda, n).unwrap() as f64;
            if poch == 0.0 {
                continue;
            }
            rescaled += c2.powi(-(lambda.weight() as i32))
                * poch
                * schur(&lambda, &t.plus)
                * schur(&lambda, &minus_neg);
        }
        let prefactor = (n as f64) * std::f64::consts::PI.ln()
            - (n as f64) * ((n + 1) as f64) / 2.0 * c2.ln();
        let expect = LogValue::from_ln(prefactor + ln_gamma(2.0) + ln_gamma(3.0))
            .mul(&LogValue::from_complex(rescaled));
        assert_relative_eq!(
            tau_c2.log_magnitude,
            expect.log_magnitude,
            epsilon = 1e-10
        );
        // sanity: the two c values genuinely differ
        assert!((tau_c1.log_magnitude - tau_c2.log_magnitude).abs() > 0.1);
    }

    #[test]
    fn last_shell_shrinks_for_small_times() {
        let t = TimeVector::reality_locked(HalfTimeVector::from_real(&[0.1]));
        let mut prev = f64::INFINITY;
        for cutoff in [2u32, 4, 6, 8] {
            let r = tau_gaussian_schur(2, 1.0, &t, cutoff).unwrap();
            // diagnostic only: warn, not assert, per the unknown convergence
            // domain; for these small times it does decrease.
            if r.last_shell_rel >= prev {
                eprintln!("warning: last-shell diagnostic not decreasing at cutoff {cutoff}");
            }
            assert!(r.last_shell_rel < prev * 1.5 + 1e-30);
            prev = r.last_shell_rel;
        }
    }
}
