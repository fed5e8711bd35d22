//! Current operators J_k, exponentials of fermion bilinears, and their
//! action on window states.
//!
//! Bilinears sum A_{mn} psi_m psi*_n conserve particle number, so their
//! exponentials are computed exactly sector by sector (dense matrix
//! exponential per occupation-number block). The window truncations of
//! J_+ and J_- are nilpotent (they move particles strictly up or strictly
//! down), so their action on a vector is a terminating Taylor series.

use crate::error::Result;
use crate::times::HalfTimeVector;
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::window::{FockOperator, ModeOperators};

/// J_+ = sum_{k>=1} t_k J_k with J_k = sum_j psi_j psi*_{j+k}, restricted to
/// mode pairs inside the window.
pub fn current_plus(ops: &ModeOperators, t_plus: &HalfTimeVector) -> FockOperator {
    let w = *ops.window();
    let mut out = FockOperator::zero(w.dim());
    for k in 1..=t_plus.support() as i32 {
        let coeff = t_plus.get(k as usize);
        if coeff == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in w.modes() {
            if w.contains(j + k) {
                out = out.add(&ops.psi(j).mul(ops.psi_star(j + k)).scale(coeff));
            }
        }
    }
    out
}

/// J_- = sum_{k>=1} t_{-k} J_{-k} with J_{-k} = sum_j psi_j psi*_{j-k};
/// `t_minus.get(k)` holds t_{-k}.
pub fn current_minus(ops: &ModeOperators, t_minus: &HalfTimeVector) -> FockOperator {
    let w = *ops.window();
    let mut out = FockOperator::zero(w.dim());
    for k in 1..=t_minus.support() as i32 {
        let coeff = t_minus.get(k as usize);
        if coeff == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in w.modes() {
            if w.contains(j - k) {
                out = out.add(&ops.psi(j).mul(ops.psi_star(j - k)).scale(coeff));
            }
        }
    }
    out
}

/// exp(A) v by the Taylor series. Terminates exactly for the nilpotent
/// window currents; otherwise stops once the running term has decayed far
/// below the accumulated result.
pub fn exp_apply(a: &FockOperator, v: &[Complex64]) -> Vec<Complex64> {
    let mut acc: Vec<Complex64> = v.to_vec();
    let mut term: Vec<Complex64> = v.to_vec();
    let mut acc_max: f64 = term.iter().map(|x| x.norm()).fold(0.0, f64::max);
    for m in 1..=1000u32 {
        term = a.apply(&term);
        let inv = 1.0 / f64::from(m);
        let mut term_max = 0.0f64;
        for (t, out) in term.iter_mut().zip(acc.iter_mut()) {
            *t *= inv;
            *out += *t;
            term_max = term_max.max(t.norm());
        }
        acc_max = acc_max.max(term_max);
        if term_max == 0.0 || term_max < 1e-25 * acc_max {
            break;
        }
    }
    acc
}

/// r exp(A) for a row vector.
pub fn exp_apply_row(a: &FockOperator, r: &[Complex64]) -> Vec<Complex64> {
    let mut acc: Vec<Complex64> = r.to_vec();
    let mut term: Vec<Complex64> = r.to_vec();
    let mut acc_max: f64 = term.iter().map(|x| x.norm()).fold(0.0, f64::max);
    for m in 1..=1000u32 {
        term = a.apply_row(&term);
        let inv = 1.0 / f64::from(m);
        let mut term_max = 0.0f64;
        for (t, out) in term.iter_mut().zip(acc.iter_mut()) {
            *t *= inv;
            *out += *t;
            term_max = term_max.max(t.norm());
        }
        acc_max = acc_max.max(term_max);
        if term_max == 0.0 || term_max < 1e-25 * acc_max {
            break;
        }
    }
    acc
}

/// Exponential of a particle-number-conserving operator, computed densely
/// inside each occupation-number sector and reassembled sparse.
pub fn exp_number_conserving(op: &FockOperator) -> FockOperator {
    let dim = op.dim();
    let n_bits = dim.trailing_zeros() as usize;
    let mut sectors: Vec<Vec<usize>> = vec![Vec::new(); n_bits + 1];
    for state in 0..dim {
        sectors[state.count_ones() as usize].push(state);
    }
    let mut out = FockOperator::zero(dim);
    for sector in sectors.iter().filter(|s| !s.is_empty()) {
        let pos: std::collections::HashMap<usize, usize> = sector
            .iter()
            .enumerate()
            .map(|(local, &state)| (state, local))
            .collect();
        let s = sector.len();
        let mut block = DMatrix::<Complex64>::zeros(s, s);
        for (local_j, &state_j) in sector.iter().enumerate() {
            let col = op.apply(&{
                let mut e = vec![Complex64::new(0.0, 0.0); dim];
                e[state_j] = Complex64::new(1.0, 0.0);
                e
            });
            for (state_i, &val) in col.iter().enumerate() {
                if val != Complex64::new(0.0, 0.0) {
                    let local_i = *pos
                        .get(&state_i)
                        .expect("operator must conserve particle number");
                    block[(local_i, local_j)] = val;
                }
            }
        }
        let eb = block.exp();
        for (local_j, &state_j) in sector.iter().enumerate() {
            let mut entries = Vec::new();
            for (local_i, &state_i) in sector.iter().enumerate() {
                let val = eb[(local_i, local_j)];
                if val.norm() > 0.0 {
                    entries.push((state_i, val));
                }
            }
            entries.sort_by_key(|e| e.0);
            out.set_column(state_j, entries);
        }
    }
    out
}

/// Operator exp(sum_{m,n in window} A(m,n) psi_m psi*_n).
///
/// The bilinear conserves particle number, so the exponential is exact up to
/// the dense per-sector matrix exponential.
pub fn exp_bilinear(
    ops: &ModeOperators,
    a: impl Fn(i32, i32) -> Complex64,
) -> Result<FockOperator> {
    let w = *ops.window();
    let mut b = FockOperator::zero(w.dim());
    for m in w.modes() {
        for n in w.modes() {
            let coeff = a(m, n);
            if coeff != Complex64::new(0.0, 0.0) {
                b = b.add(&ops.psi(m).mul(ops.psi_star(n)).scale(coeff));
            }
        }
    }
    Ok(exp_number_conserving(&b))
}
