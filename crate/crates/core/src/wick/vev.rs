//! Wick's theorem: contraction matrices, vacuum expectation values, and the
//! two closed forms for field-product expectations.

use crate::error::{Error, Result};
use crate::linalg::det_complex;
use num_complex::Complex64;

use super::window::{build_mode_operators, FockOperator, FockWindow};

/// A linear combination sum a_n psi_n of annihilation-side fields.
#[derive(Clone, Debug)]
pub struct PsiCombo {
    pub terms: Vec<(i32, Complex64)>,
}

/// A linear combination sum b_m psi*_m of creation-side fields.
#[derive(Clone, Debug)]
pub struct PsiStarCombo {
    pub terms: Vec<(i32, Complex64)>,
}

impl PsiCombo {
    pub fn single(mode: i32) -> Self {
        PsiCombo {
            terms: vec![(mode, Complex64::new(1.0, 0.0))],
        }
    }
}

impl PsiStarCombo {
    pub fn single(mode: i32) -> Self {
        PsiStarCombo {
            terms: vec![(mode, Complex64::new(1.0, 0.0))],
        }
    }
}

/// Vacuum contraction <0| w w* |0> built purely from the pairing rules
/// <0| psi_n psi*_m |0> = delta_{nm} for m < 0 and 0 for m >= 0.
pub fn contraction(w: &PsiCombo, w_star: &PsiStarCombo) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(n, a) in &w.terms {
        if n >= 0 {
            continue;
        }
        for &(m, b) in &w_star.terms {
            if m == n {
                acc += a * b;
            }
        }
    }
    acc
}

/// The n x n matrix of pairwise contractions <w_i w*_j>.
pub fn contraction_matrix(ws: &[PsiCombo], ws_star: &[PsiStarCombo]) -> Vec<Complex64> {
    let n = ws.len();
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = contraction(&ws[i], &ws_star[j]);
        }
    }
    m
}

/// Wick's theorem for ordered products:
/// <0| w_1 .. w_n w*_n .. w*_1 |0> = det <w_i w*_j>.
pub fn wick_determinant(ws: &[PsiCombo], ws_star: &[PsiStarCombo]) -> Result<Complex64> {
    if ws.len() != ws_star.len() {
        return Err(Error::invalid("wick_determinant needs equal-length lists"));
    }
    let n = ws.len();
    let mut m = contraction_matrix(ws, ws_star);
    Ok(det_complex(&mut m, n))
}

/// Evaluate <0| op_1 op_2 ... op_k |0> with the explicit window matrices
/// (rightmost operator acts first). The slow cross-check for
/// [`wick_determinant`].
pub fn vacuum_expectation_fock(window: &FockWindow, ops_in_order: &[FockOperator]) -> Complex64 {
    let vac = window.basis_vector(window.vacuum());
    let mut v = vac.clone();
    for op in ops_in_order.iter().rev() {
        v = op.apply(&v);
    }
    vac.iter().zip(&v).map(|(a, b)| a * b).sum()
}

/// Materialize a combo as a window operator (modes outside the window are
/// dropped; callers pick windows wide enough that nothing is lost).
pub fn combo_operator(window: &FockWindow, terms: &[(i32, Complex64)], star: bool) -> FockOperator {
    let ops = build_mode_operators(window);
    let mut out = FockOperator::zero(window.dim());
    for &(mode, coeff) in terms {
        if !window.contains(mode) {
            continue;
        }
        let base = if star { ops.psi_star(mode) } else { ops.psi(mode) };
        out = out.add(&base.scale(coeff));
    }
    out
}

/// Both closed forms of the shifted-vacuum field-product expectation
/// <N| psi(z_1)..psi(z_n) psi*(zeta_n)..psi*(zeta_1) |N>.
#[derive(Clone, Copy, Debug)]
pub struct VevForms {
    /// prod_l (z_l/zeta_l)^N * det_{ij} [ zeta_j / (z_i - zeta_j) ]
    pub determinant_form: Complex64,
    /// prod_l z_l^N zeta_l^{1-N} / (z_l - zeta_l)
    ///   * prod_{i<j} (z_i - z_j)(zeta_j - zeta_i) / ((z_i - zeta_j)(z_j - zeta_i))
    pub product_form: Complex64,
    /// |det - prod| / (|det| + |prod|), the cross-validation metric.
    pub rel_diff: f64,
}

/// Evaluate the Cauchy-type determinant form and the explicit product form
/// of the field-product expectation and report their difference. Both are
/// homogeneous of degree zero in the points (each matrix entry and each
/// product factor is a ratio of like powers).
pub fn vev_fields_product(n_charge: i64, zs: &[Complex64], zetas: &[Complex64]) -> Result<VevForms> {
    if zs.len() != zetas.len() || zs.is_empty() {
        return Err(Error::invalid(
            "vev_fields_product needs equal non-empty point lists",
        ));
    }
    for &z in zs {
        for &zeta in zetas {
            if z == zeta {
                return Err(Error::invalid("coincident z_i = zeta_j (pole)"));
            }
        }
    }
    let n = zs.len();
    let n_charge = n_charge as i32;

    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = zetas[j] / (zs[i] - zetas[j]);
        }
    }
    let mut det = det_complex(&mut m, n);
    for l in 0..n {
        det *= (zs[l] / zetas[l]).powi(n_charge);
    }

    let mut prod = Complex64::new(1.0, 0.0);
    for l in 0..n {
        prod *= zs[l].powi(n_charge) * zetas[l].powi(1 - n_charge) / (zs[l] - zetas[l]);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            prod *= (zs[i] - zs[j]) * (zetas[j] - zetas[i])
                / ((zs[i] - zetas[j]) * (zs[j] - zetas[i]));
        }
    }

    let rel_diff = (det - prod).norm() / (det.norm() + prod.norm());
    Ok(VevForms {
        determinant_form: det,
        product_form: prod,
        rel_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_mode_contractions() {
        // <0| psi_{-1} psi*_{-1} |0> = 1, <0| psi_0 psi*_0 |0> = 0
        let one = wick_determinant(&[PsiCombo::single(-1)], &[PsiStarCombo::single(-1)]).unwrap();
        assert_eq!(one, Complex64::new(1.0, 0.0));
        let zero = wick_determinant(&[PsiCombo::single(0)], &[PsiStarCombo::single(0)]).unwrap();
        assert_eq!(zero, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn odd_products_vanish_in_fock() {
        let w = FockWindow::new(-2, 2).unwrap();
        let c = |mode: i32, star: bool| {
            combo_operator(&w, &[(mode, Complex64::new(1.0, 0.0))], star)
        };
        let v = vacuum_expectation_fock(&w, &[c(-1, false), c(-1, true), c(0, false)]);
        assert_eq!(v, Complex64::new(0.0, 0.0));
        let v3 = vacuum_expectation_fock(&w, &[c(1, false), c(-2, true), c(0, true)]);
        assert_eq!(v3, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn wick_matches_explicit_fock_products() {
        // random combos of up to 4 factors, checked against the window
        // matrix product evaluation
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = FockWindow::new(-4, 4).unwrap();
        for n in 1..=4usize {
            for _ in 0..8 {
                let mut ws = Vec::new();
                let mut ws_star = Vec::new();
                for _ in 0..n {
                    let combo = PsiCombo {
                        terms: (0..2)
                            .map(|_| {
                                (
                                    rng.gen_range(-4..4),
                                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                                )
                            })
                            .collect(),
                    };
                    let combo_star = PsiStarCombo {
                        terms: (0..2)
                            .map(|_| {
                                (
                                    rng.gen_range(-4..4),
                                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                                )
                            })
                            .collect(),
                    };
                    ws.push(combo);
                    ws_star.push(combo_star);
                }
                let det = wick_determinant(&ws, &ws_star).unwrap();

                let mut ops_in_order: Vec<FockOperator> = Vec::new();
                for combo in &ws {
                    ops_in_order.push(combo_operator(&w, &combo.terms, false));
                }
                for combo in ws_star.iter().rev() {
                    ops_in_order.push(combo_operator(&w, &combo.terms, true));
                }
                let direct = vacuum_expectation_fock(&w, &ops_in_order);
                assert!(
                    (det - direct).norm() <= 1e-12 * (1.0 + det.norm()),
                    "n={n}: {det} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn n1_field_vev_is_zeta_over_z_minus_zeta() {
        let z = Complex64::new(1.3, 0.4);
        let zeta = Complex64::new(0.2, -0.5);
        let forms = vev_fields_product(0, &[z], &[zeta]).unwrap();
        let expect = zeta / (z - zeta);
        assert!((forms.determinant_form - expect).norm() < 1e-14);
        assert!((forms.product_form - expect).norm() < 1e-14);
    }

    #[test]
    fn field_vev_matches_window_engine() {
        // <0| psi(z) psi*(zeta) |0> = sum_{k<0} z^k zeta^{-k}; a deep window
        // reproduces zeta/(z - zeta) for |zeta| < |z| up to the geometric tail.
        let z = Complex64::new(1.5, 0.3);
        let zeta = Complex64::new(0.25, -0.2);
        let w = FockWindow::new(-12, 2).unwrap();
        let psi_terms: Vec<(i32, Complex64)> =
            w.modes().map(|k| (k, z.powi(k))).collect();
        let psi_star_terms: Vec<(i32, Complex64)> =
            w.modes().map(|k| (k, zeta.powi(-k))).collect();
        let direct = vacuum_expectation_fock(
            &w,
            &[
                combo_operator(&w, &psi_terms, false),
                combo_operator(&w, &psi_star_terms, true),
            ],
        );
        let forms = vev_fields_product(0, &[z], &[zeta]).unwrap();
        let tail = (zeta.norm() / z.norm()).powi(12);
        assert!(
            (direct - forms.product_form).norm() < 10.0 * tail + 1e-12,
            "direct {direct} closed {}",
            forms.product_form
        );
    }

    /// Random instances with each z_i paired to a nearby zeta_i and distinct
    /// pairs well separated. The identity holds for any configuration, but a
    /// 5x5 Cauchy determinant with crowded points cancels away several
    /// digits in f64, so the ensemble keeps the matrices diagonally dominant
    /// and the comparison meaningful at 1e-12.
    fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut centers: Vec<Complex64> = Vec::with_capacity(n);
        while centers.len() < n {
            let cand = Complex64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            if cand.norm() >= 0.8 && centers.iter().all(|c| (c - cand).norm() >= 2.0) {
                centers.push(cand);
            }
        }
        let mut zs = Vec::with_capacity(n);
        let mut zetas = Vec::with_capacity(n);
        for &c in &centers {
            let delta = Complex64::from_polar(
                rng.gen_range(0.1..0.3),
                rng.gen_range(0.0..(2.0 * std::f64::consts::PI)),
            );
            zs.push(c + delta);
            zetas.push(c - delta);
        }
        (zs, zetas)
    }

    #[test]
    fn two_closed_forms_agree_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let n = rng.gen_range(1..=5usize);
            let n_charge = rng.gen_range(-2..=2i64);
            let (zs, zetas) = random_instance(&mut rng, n);
            let forms = vev_fields_product(n_charge, &zs, &zetas).unwrap();
            assert!(forms.rel_diff < 1e-12, "n={n} N={n_charge}: {}", forms.rel_diff);
        }
    }

    #[test]
    fn vev_is_homogeneous_of_degree_zero() {
        // Every factor of the product form is a ratio of equal homogeneity
        // degrees, so rescaling all points leaves the value unchanged; the
        // brute-force evaluation confirms it.
        let zs = [Complex64::new(1.2, 0.5), Complex64::new(-0.8, 1.1)];
        let zetas = [Complex64::new(0.3, -0.9), Complex64::new(-1.5, -0.4)];
        let base = vev_fields_product(2, &zs, &zetas).unwrap().product_form;
        for lambda in [0.5, 2.0, 7.3] {
            let zs2: Vec<Complex64> = zs.iter().map(|&z| lambda * z).collect();
            let zetas2: Vec<Complex64> = zetas.iter().map(|&z| lambda * z).collect();
            let scaled = vev_fields_product(2, &zs2, &zetas2).unwrap().product_form;
            assert!(
                (scaled - base).norm() < 1e-12 * base.norm(),
                "lambda={lambda}"
            );
        }
    }

    #[test]
    fn coincident_points_are_poles() {
        let z = Complex64::new(0.5, 0.5);
        assert!(vev_fields_product(0, &[z], &[z]).is_err());
    }
}
