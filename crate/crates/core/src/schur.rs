//! Partitions, the elementary polynomials p_k and Schur functions.
//!
//! The polynomials p_k(t) are the Taylor coefficients of exp(xi(t, z)) with
//! xi(t, z) = sum_{k>=1} t_k z^k; Schur functions are the Jacobi-Trudi
//! determinants s_lambda(t) = det p_{lambda_i - i + j}(t). Together with the
//! generalized Pochhammer factor (N)_lambda they are the building blocks of
//! the Schur expansion of the Gaussian-measure tau-function.

use crate::error::{Error, Result};
use crate::linalg::det_complex;
use crate::times::HalfTimeVector;
use num_complex::Complex64;

/// A partition lambda_1 >= lambda_2 >= ... >= lambda_l > 0.
///
/// The empty sequence is the valid empty diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct YoungDiagram {
    rows: Vec<u32>,
}

impl YoungDiagram {
    /// Validates positivity and the non-increasing order of the rows.
    pub fn new(rows: Vec<u32>) -> Result<Self> {
        if rows.iter().any(|&r| r == 0) {
            return Err(Error::invalid("Young diagram rows must be positive"));
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid("Young diagram rows must be non-increasing"));
        }
        Ok(YoungDiagram { rows })
    }

    pub fn empty() -> Self {
        YoungDiagram { rows: Vec::new() }
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    /// Number of rows l(lambda).
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Total number of boxes |lambda|.
    pub fn weight(&self) -> u32 {
        self.rows.iter().sum()
    }
}

impl std::fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// p_k(t), the k-th Taylor coefficient of exp(xi(t, z)).
///
/// Computed by the Newton-type recurrence
/// p_0 = 1, p_k = (1/k) sum_{j=1}^{k} j t_j p_{k-j}.
pub fn elementary_p(k: i64, t: &HalfTimeVector) -> Result<Complex64> {
    if k < 0 {
        return Err(Error::invalid("elementary_p requires k >= 0"));
    }
    Ok(elementary_p_upto(k as usize, t)[k as usize])
}

/// All of p_0, ..., p_kmax in one pass of the recurrence.
pub fn elementary_p_upto(k_max: usize, t: &HalfTimeVector) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(0.0, 0.0); k_max + 1];
    p[0] = Complex64::new(1.0, 0.0);
    let support = t.support();
    for k in 1..=k_max {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k.min(support) {
            acc += (j as f64) * t.get(j) * p[k - j];
        }
        p[k] = acc / (k as f64);
    }
    p
}

/// Schur function s_lambda(t) as the Jacobi-Trudi determinant
/// det_{1<=i,j<=l} p_{lambda_i - i + j}(t), with p_k = 0 for k < 0.
pub fn schur(lambda: &YoungDiagram, t: &HalfTimeVector) -> Complex64 {
    schur_with_rows(lambda, lambda.num_rows(), t)
}

/// Jacobi-Trudi determinant of size `num_rows` >= l(lambda), padding lambda
/// with zero rows. The value is independent of the padding.
pub fn schur_with_rows(lambda: &YoungDiagram, num_rows: usize, t: &HalfTimeVector) -> Complex64 {
    assert!(num_rows >= lambda.num_rows());
    let l = num_rows;
    if l == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let row_len = |i: usize| -> i64 {
        if i < lambda.num_rows() {
            i64::from(lambda.rows()[i])
        } else {
            0
        }
    };
    let k_max = (row_len(0) - 1 + l as i64).max(0) as usize;
    let p = elementary_p_upto(k_max, t);
    let mut m = vec![Complex64::new(0.0, 0.0); l * l];
    for i in 0..l {
        for j in 0..l {
            let idx = row_len(i) - (i as i64 + 1) + (j as i64 + 1);
            m[i * l + j] = if idx < 0 {
                Complex64::new(0.0, 0.0)
            } else {
                p[idx as usize]
            };
        }
    }
    det_complex(&mut m, l)
}

/// Generalized Pochhammer factor
/// (N)_lambda = prod_i (N+1-i)(N+2-i)...(N+lambda_i-i).
///
/// Vanishes whenever l(lambda) > N, which truncates Schur sums over diagrams
/// with too many rows. Exact integer arithmetic; errors if the product
/// exceeds i128 (use [`pochhammer_ln`] for large diagrams).
pub fn pochhammer(lambda: &YoungDiagram, n: i64) -> Result<i128> {
    if n < 0 {
        return Err(Error::invalid("pochhammer requires N >= 0"));
    }
    let mut prod: i128 = 1;
    for (i, &row) in lambda.rows().iter().enumerate() {
        let i = i as i64 + 1;
        for a in 1..=i64::from(row) {
            prod = prod
                .checked_mul(i128::from(n + a - i))
                .ok_or_else(|| Error::invalid("pochhammer overflows i128"))?;
            if prod == 0 {
                return Ok(0);
            }
        }
    }
    Ok(prod)
}

/// ln (N)_lambda, or -inf when the factor vanishes (l(lambda) > N).
///
/// For N >= 0 every surviving factor is a positive integer, so the product
/// is a ratio of factorials per row: Gamma(N+lambda_i-i+1) / Gamma(N+1-i).
pub fn pochhammer_ln(lambda: &YoungDiagram, n: i64) -> Result<f64> {
    if n < 0 {
        return Err(Error::invalid("pochhammer requires N >= 0"));
    }
    if lambda.num_rows() as i64 > n {
        return Ok(f64::NEG_INFINITY);
    }
    use statrs::function::gamma::ln_gamma;
    let mut acc = 0.0;
    for (i, &row) in lambda.rows().iter().enumerate() {
        let i = (i + 1) as f64;
        let nf = n as f64;
        acc += ln_gamma(nf + f64::from(row) - i + 1.0) - ln_gamma(nf + 1.0 - i);
    }
    Ok(acc)
}

/// All partitions with |lambda| <= max_weight, ordered by weight and then
/// lexicographically descending within each weight. The order is fixed so
/// truncated Schur sums are reproducible.
pub fn enumerate_partitions(max_weight: u32) -> Vec<YoungDiagram> {
    enumerate_partitions_bounded(max_weight, max_weight as usize)
}

/// Same order as [`enumerate_partitions`], restricted to diagrams with at
/// most `max_rows` rows. Schur sums weighted by (N)_lambda only see
/// l(lambda) <= N, and the bounded enumeration keeps large cutoffs cheap.
pub fn enumerate_partitions_bounded(max_weight: u32, max_rows: usize) -> Vec<YoungDiagram> {
    let mut out = Vec::new();
    for w in 0..=max_weight {
        let mut current = Vec::new();
        gen_partitions(w, w, max_rows, &mut current, &mut out);
    }
    out
}

fn gen_partitions(
    remaining: u32,
    max_part: u32,
    max_rows: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<YoungDiagram>,
) {
    if remaining == 0 {
        out.push(YoungDiagram {
            rows: current.clone(),
        });
        return;
    }
    if current.len() == max_rows {
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        current.push(part);
        gen_partitions(remaining - part, part, max_rows, current, out);
        current.pop();
    }
}
