//! Complex LU determinants, plain and log-domain.
//!
//! Determinant values in this crate range from O(1) Jacobi-Trudi minors to
//! astronomically scaled Toeplitz/Fredholm determinants, so the pivoted LU
//! is provided in two flavours: one returning a plain complex number and one
//! accumulating log|det| and the phase directly.

use crate::logval::LogValue;
use num_complex::Complex64;

/// In-place partial-pivoting LU; returns (number of row swaps, singular).
fn lu_in_place(m: &mut [Complex64], n: usize) -> (usize, bool) {
    let mut swaps = 0usize;
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = m[col * n + col].norm_sqr();
        for row in (col + 1)..n {
            let mag = m[row * n + col].norm_sqr();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag == 0.0 {
            return (swaps, true);
        }
        if pivot_row != col {
            for j in 0..n {
                m.swap(col * n + j, pivot_row * n + j);
            }
            swaps += 1;
        }
        let pivot = m[col * n + col];
        for row in (col + 1)..n {
            let factor = m[row * n + col] / pivot;
            m[row * n + col] = factor;
            for j in (col + 1)..n {
                let sub = factor * m[col * n + j];
                m[row * n + j] -= sub;
            }
        }
    }
    (swaps, false)
}

/// Determinant of a dense row-major n x n complex matrix (destroys `m`).
pub fn det_complex(m: &mut [Complex64], n: usize) -> Complex64 {
    assert_eq!(m.len(), n * n);
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let (swaps, singular) = lu_in_place(m, n);
    if singular {
        return Complex64::new(0.0, 0.0);
    }
    let mut det = if swaps % 2 == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(-1.0, 0.0)
    };
    for i in 0..n {
        det *= m[i * n + i];
    }
    det
}

/// Determinant as a [`LogValue`]: log-magnitude and phase are accumulated
/// from the U diagonal, so the result survives any dynamic range the pivots
/// individually fit in.
pub fn logdet_complex(m: &mut [Complex64], n: usize) -> LogValue {
    assert_eq!(m.len(), n * n);
    if n == 0 {
        return LogValue::one();
    }
    let (swaps, singular) = lu_in_place(m, n);
    if singular {
        return LogValue::zero();
    }
    let mut ln_mag = 0.0f64;
    let mut phase = if swaps % 2 == 0 { 0.0 } else { std::f64::consts::PI };
    for i in 0..n {
        let d = m[i * n + i];
        ln_mag += d.norm().ln();
        phase += d.arg();
    }
    LogValue::from_ln_and_phase(ln_mag, phase)
}
