//! Finite-difference verification of the lowest Hirota bilinear identity
//!
//! ```text
//! d_{t_1} tau_n * d_{t_-1} tau_n - tau_n * d_{t_1} d_{t_-1} tau_n = tau_{n+1} tau_{n-1}.
//! ```
//!
//! Writing tau = exp(f), the left side collapses to -tau_n^2 * d_{t_1}d_{t_-1} f,
//! so the check needs only the mixed second derivative of log tau. Assembling
//! the tau-derivatives from log-derivatives this way keeps the astronomically
//! scaled magnitudes out of the finite differences entirely.

use crate::error::Result;
use crate::logval::{relative_diff, LogValue};
use crate::times::TimeVector;
use num_complex::Complex64;

use super::{tau_gaussian_schur, tau_toeplitz};

/// Outcome of a Hirota check at one base point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HirotaOutcome {
    /// Relative residual |LHS - RHS| / (|LHS| + |RHS| + floor).
    Residual(f64),
    /// tau_n vanished at the base point; the relative residual is undefined
    /// there and no number is reported.
    ZeroTau,
}

const RESIDUAL_FLOOR: f64 = 1e-300;

/// Evaluate the Hirota residual for a tau family at discrete index `n` and
/// base point `t`, using central differences on the corner stencil in
/// (t_1, t_{-1}) with one Richardson extrapolation step (step, step/2).
pub fn hirota_residual<F>(tau: &F, n: i64, t: &TimeVector, step: f64) -> Result<HirotaOutcome>
where
    F: Fn(i64, &TimeVector) -> Result<LogValue>,
{
    assert!(step > 0.0, "step must be positive");
    let center = tau(n, t)?;
    if center.is_zero() {
        return Ok(HirotaOutcome::ZeroTau);
    }
    let ref_phase = center.phase;

    let log_at = |a: f64, b: f64| -> Result<Complex64> {
        let shifted = t.shifted(Complex64::new(a, 0.0), Complex64::new(b, 0.0));
        Ok(tau(n, &shifted)?.ln_complex_near(ref_phase))
    };
    let mixed = |h: f64| -> Result<Complex64> {
        let val = (log_at(h, h)? - log_at(h, -h)? - log_at(-h, h)? + log_at(-h, -h)?)
            / Complex64::new(4.0 * h * h, 0.0);
        Ok(val)
    };
    let d_coarse = mixed(step)?;
    let d_fine = mixed(step / 2.0)?;
    let d = (4.0 * d_fine - d_coarse) / 3.0;

    let lhs = center
        .powi(2)
        .mul(&LogValue::from_complex(-d));
    let rhs = tau(n + 1, t)?.mul(&tau(n - 1, t)?);
    Ok(HirotaOutcome::Residual(relative_diff(
        &lhs,
        &rhs,
        RESIDUAL_FLOOR,
    )))
}

/// The Gaussian-measure tau family (Schur expansion) as a Hirota test
/// subject.
pub fn gaussian_family(
    c: f64,
    cutoff: u32,
) -> impl Fn(i64, &TimeVector) -> Result<LogValue> {
    move |n, t| Ok(tau_gaussian_schur(n, c, t, cutoff)?.value)
}

/// The circle-measure (Toeplitz determinant) tau family.
pub fn toeplitz_family(n_grid: usize) -> impl Fn(i64, &TimeVector) -> Result<LogValue> {
    move |n, t| tau_toeplitz(n, t, n_grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::times::HalfTimeVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn residual_of(outcome: HirotaOutcome) -> f64 {
        match outcome {
            HirotaOutcome::Residual(r) => r,
            HirotaOutcome::ZeroTau => panic!("unexpected zero tau"),
        }
    }

    #[test]
    fn gaussian_family_at_origin() {
        let fam = gaussian_family(1.0, 8);
        let r = residual_of(hirota_residual(&fam, 1, &TimeVector::zero(), 1e-3).unwrap());
        assert!(r < 1e-4, "residual {r}");
    }

    #[test]
    fn gaussian_family_at_random_locked_times() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let fam = gaussian_family(1.0, 32);
        for _ in 0..5 {
            let t = TimeVector::reality_locked(HalfTimeVector::new(vec![
                Complex64::new(rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2)),
                Complex64::new(rng.gen_range(-0.15..0.15), rng.gen_range(-0.15..0.15)),
            ]));
            for n in 1..=3i64 {
                let r = residual_of(hirota_residual(&fam, n, &t, 1e-3).unwrap());
                assert!(r < 1e-4, "n={n} residual {r}");
            }
        }
    }

    #[test]
    fn toeplitz_family_at_random_locked_times() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let fam = toeplitz_family(128);
        for _ in 0..3 {
            let t = TimeVector::reality_locked(HalfTimeVector::new(vec![
                Complex64::new(rng.gen_range(-0.25..0.25), rng.gen_range(-0.25..0.25)),
            ]));
            let r = residual_of(hirota_residual(&fam, 2, &t, 1e-3).unwrap());
            assert!(r < 1e-4, "residual {r}");
        }
    }

    #[test]
    fn degenerate_vacuum_edge() {
        // n = 0: tau_{-1} = 0 makes the right side vanish; the left side is
        // -tau_0^2 d d log tau_0 with tau_0 = 1 identically, so the residual
        // collapses to 0 through the guarded denominator.
        let fam = gaussian_family(1.0, 6);
        let t = TimeVector::reality_locked(HalfTimeVector::from_real(&[0.1]));
        let r = residual_of(hirota_residual(&fam, 0, &t, 1e-3).unwrap());
        assert!(r < 1e-9, "residual {r}");
    }

    #[test]
    fn zero_tau_is_a_distinct_outcome() {
        let fam = |n: i64, _t: &TimeVector| -> Result<LogValue> {
            Ok(if n == 7 {
                LogValue::zero()
            } else {
                LogValue::one()
            })
        };
        let out = hirota_residual(&fam, 7, &TimeVector::zero(), 1e-3).unwrap();
        assert_eq!(out, HirotaOutcome::ZeroTau);
    }
}
