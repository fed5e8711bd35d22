//! End-to-end check of the operator form of the tau-function against the
//! N-fold integral form, at small N with atomic measures.
//!
//! The operator side evaluates <N| e^{J_+} g_0 P_+ e^{-J_-} |N> where g_0 is
//! assembled term by term from its expansion
//!
//! ```text
//! g_0 = sum_m (1/m!) int psi_+(z_1)..psi_+(z_m) P_- psi*_+(1/conj z_m)..psi*_+(1/conj z_1) d_mu^m,
//! ```
//!
//! which for an atomic measure is a finite sum over point tuples. Only the
//! m = N term can survive (annihilation counting on one side, P_- on the
//! other); the per-m contributions are returned so that cancellation can be
//! asserted term by term. The integral side is the exhaustive atomic-measure
//! sum of the N-fold Vandermonde integral, evaluated by the Monte Carlo
//! module's exact path.

use crate::canonical::tau_integral_mc;
use crate::error::{Error, Result};
use crate::logval::{relative_diff, LogValue};
use crate::measure::MeasureSpec;
use crate::times::TimeVector;
use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use super::bilinear::{current_minus, current_plus, exp_apply, exp_apply_row};
use super::window::{build_mode_operators, projectors, shifted_vacuum_bra, shifted_vacuum_ket, FockWindow};

/// Outcome of the operator-vs-integral comparison.
#[derive(Clone, Debug)]
pub struct OperatorVsIntegral {
    pub operator_value: LogValue,
    pub integral_value: LogValue,
    /// relative_diff of the two values.
    pub rel_diff: f64,
    /// Contribution of each g_0-expansion order m = 0..=m_cap, raw complex.
    /// All but m = N must vanish.
    pub expansion_terms: Vec<Complex64>,
}

/// Evaluate both sides for an atomic measure with up to four points.
///
/// `window` must contain mode 0 through N-1 and enough headroom above for
/// the truncated currents; insufficiency shows up as drift under window
/// enlargement (see [`window_drift`]).
pub fn tau_operator_vs_integral(
    n: u32,
    t: &TimeVector,
    points: &[Complex64],
    weights: &[f64],
    window: &FockWindow,
    m_cap: usize,
) -> Result<OperatorVsIntegral> {
    if points.len() != weights.len() || points.is_empty() || points.len() > 4 {
        return Err(Error::invalid(
            "atomic measure needs 1..=4 points with matching weights",
        ));
    }
    if n > 0 && !window.contains(n as i32 - 1) {
        return Err(Error::invalid("window too small for |N>"));
    }

    let ops = build_mode_operators(window);
    let (p_plus, p_minus) = projectors(&ops);

    // ket side: P_+ e^{-J_-} |N>
    let (ket_idx, ket_sign) = shifted_vacuum_ket(&ops, n as i32)?;
    let mut ket = window.basis_vector(ket_idx);
    ket[ket_idx] *= ket_sign;
    let j_minus = current_minus(&ops, &t.minus);
    let ket = p_plus.apply(&exp_apply(&j_minus.scale(Complex64::new(-1.0, 0.0)), &ket));

    // bra side: <N| e^{J_+}
    let (bra_idx, bra_sign) = shifted_vacuum_bra(&ops, n as i32)?;
    let mut bra = window.basis_vector(bra_idx);
    bra[bra_idx] *= bra_sign;
    let j_plus = current_plus(&ops, &t.plus);
    let bra = exp_apply_row(&j_plus, &bra);

    // g_0 expansion term by term
    let psi_plus_ops: Vec<_> = points.iter().map(|&z| ops.psi_plus(z)).collect();
    let psi_star_ops: Vec<_> = points.iter().map(|&z| ops.psi_star_plus_image(z)).collect();
    let p = points.len();
    let mut expansion_terms = Vec::with_capacity(m_cap + 1);
    for m in 0..=m_cap {
        let mut term = Complex64::new(0.0, 0.0);
        let mut tuple = vec![0usize; m];
        loop {
            // apply psi*_+(1/conj z_{i_1}) .. psi*_+(1/conj z_{i_m}) right to left,
            // then P_-, then psi_+(z_{i_m}) .. psi_+(z_{i_1})
            let mut v = ket.clone();
            let mut w_prod = 1.0f64;
            for &i in tuple.iter() {
                v = psi_star_ops[i].apply(&v);
                w_prod *= weights[i];
            }
            v = p_minus.apply(&v);
            for &i in tuple.iter().rev() {
                v = psi_plus_ops[i].apply(&v);
            }
            term += w_prod * bra.iter().zip(&v).map(|(a, b)| a * b).sum::<Complex64>();
            // advance the ordered tuple
            let mut k = 0usize;
            loop {
                if k == m {
                    break;
                }
                tuple[k] += 1;
                if tuple[k] < p {
                    break;
                }
                tuple[k] = 0;
                k += 1;
            }
            if k == m {
                break;
            }
        }
        expansion_terms.push(term / ln_gamma(m as f64 + 1.0).exp());
    }
    let operator_total: Complex64 = expansion_terms.iter().sum();
    let operator_value = LogValue::from_complex(operator_total);

    // integral side: exhaustive atomic-measure sum (exact path of the MC
    // estimator); N = 0 is the empty integral, 1 by definition.
    let integral_value = if n == 0 {
        LogValue::one()
    } else {
        let measure = MeasureSpec::discrete(points.to_vec(), weights.to_vec())?;
        let est = tau_integral_mc(n, &measure, t, 1, 0)?;
        debug_assert!(est.exact);
        est.value
    };

    Ok(OperatorVsIntegral {
        operator_value,
        integral_value,
        rel_diff: relative_diff(&operator_value, &integral_value, 1e-300),
        expansion_terms,
    })
}

/// Leak detection: relative change of the operator value when the window is
/// enlarged by `extra` modes above. A truncation-insensitive setup drifts at
/// the tail level of the time exponentials.
pub fn window_drift(
    n: u32,
    t: &TimeVector,
    points: &[Complex64],
    weights: &[f64],
    window: &FockWindow,
    extra: i32,
) -> Result<f64> {
    let larger = FockWindow::new(window.m_min(), window.m_max() + extra)?;
    let m_cap = (n as usize).max(1) + 1;
    let base = tau_operator_vs_integral(n, t, points, weights, window, m_cap)?;
    let wide = tau_operator_vs_integral(n, t, points, weights, &larger, m_cap)?;
    Ok(relative_diff(
        &base.operator_value,
        &wide.operator_value,
        1e-300,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::times::HalfTimeVector;

    fn default_window() -> FockWindow {
        FockWindow::new(-2, 9).unwrap()
    }

    #[test]
    fn n0_is_one_on_both_sides() {
        let t = TimeVector::reality_locked(HalfTimeVector::from_real(&[0.1]));
        let pts = [Complex64::new(0.7, 0.2)];
        let res =
            tau_operator_vs_integral(0, &t, &pts, &[0.9], &default_window(), 2).unwrap();
        assert!(res.rel_diff < 1e-12);
        assert!((res.operator_value.log_magnitude).abs() < 1e-12);
        // m = 1, 2 contribute nothing
        for m in 1..res.expansion_terms.len() {
            assert!(res.expansion_terms[m].norm() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn n1_single_point_zero_times() {
        // single atom at z0 with t = 0: tau_1 = weight
        let t = TimeVector::zero();
        let z0 = Complex64::new(0.6, -0.3);
        let weight = 1.7;
        let res =
            tau_operator_vs_integral(1, &t, &[z0], &[weight], &default_window(), 3).unwrap();
        assert!(res.rel_diff < 1e-12, "rel diff {}", res.rel_diff);
        assert!((res.operator_value.log_magnitude - weight.ln()).abs() < 1e-12);
    }

    #[test]
    fn n2_three_points_with_times() {
        let t = TimeVector::reality_locked(HalfTimeVector::new(vec![Complex64::new(
            0.12, 0.07,
        )]));
        let pts = [
            Complex64::new(0.8, 0.1),
            Complex64::new(-0.5, 0.6),
            Complex64::new(0.2, -0.9),
        ];
        let ws = [1.0, 0.6, 1.4];
        let res = tau_operator_vs_integral(2, &t, &pts, &ws, &default_window(), 4).unwrap();
        assert!(res.rel_diff < 1e-10, "rel diff {}", res.rel_diff);
    }

    #[test]
    fn only_m_equals_n_contributes() {
        let t = TimeVector::reality_locked(HalfTimeVector::from_real(&[0.15]));
        let pts = [Complex64::new(0.9, 0.2), Complex64::new(-0.4, 0.5)];
        let ws = [1.1, 0.8];
        for n in 0..=2u32 {
            let res = tau_operator_vs_integral(n, &t, &pts, &ws, &default_window(), 4).unwrap();
            let scale = res
                .expansion_terms
                .iter()
                .map(|c| c.norm())
                .fold(1.0, f64::max);
            for (m, term) in res.expansion_terms.iter().enumerate() {
                if m == n as usize {
                    continue;
                }
                assert!(
                    term.norm() <= 1e-12 * scale,
                    "N={n} m={m}: {term}"
                );
            }
        }
    }

    #[test]
    fn window_enlargement_does_not_drift() {
        let t = TimeVector::reality_locked(HalfTimeVector::from_real(&[0.1]));
        let pts = [Complex64::new(0.7, 0.3), Complex64::new(-0.2, 0.4)];
        let ws = [1.0, 1.0];
        let w = FockWindow::new(-2, 9).unwrap();
        let drift = window_drift(2, &t, &pts, &ws, &w, 2).unwrap();
        assert!(drift < 1e-12, "drift {drift}");
    }
}
