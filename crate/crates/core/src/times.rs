//! Time parameters of the 2D Toda hierarchy.
//!
//! A tau-function depends on two half-infinite families t_1, t_2, ... and
//! t_{-1}, t_{-2}, ...; we keep finitely supported vectors of each. The
//! physical (positive-weight) ensembles impose the reality condition
//! t_{-k} = -conj(t_k), tracked by a flag on [`TimeVector`].

use num_complex::Complex64;

/// Finitely supported half-family t_1, ..., t_K (index 0 holds t_1).
#[derive(Clone, Debug, PartialEq)]
pub struct HalfTimeVector {
    coeffs: Vec<Complex64>,
}

impl HalfTimeVector {
    /// Build from coefficients [t_1, t_2, ...]; trailing zeros are trimmed.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        HalfTimeVector { coeffs }
    }

    pub fn zero() -> Self {
        HalfTimeVector { coeffs: Vec::new() }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// t_k for k >= 1; zero beyond the support.
    pub fn get(&self, k: usize) -> Complex64 {
        assert!(k >= 1, "half-time index starts at 1");
        self.coeffs
            .get(k - 1)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Largest K with t_K != 0 (0 for the zero vector).
    pub fn support(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Component-wise negation.
    pub fn negated(&self) -> Self {
        HalfTimeVector {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Component-wise conjugation.
    pub fn conjugated(&self) -> Self {
        HalfTimeVector {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Copy with t_k replaced by t_k + delta.
    pub fn shifted(&self, k: usize, delta: Complex64) -> Self {
        assert!(k >= 1);
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < k {
            coeffs.resize(k, Complex64::new(0.0, 0.0));
        }
        coeffs[k - 1] += delta;
        Self::new(coeffs)
    }

    /// max_k |t_k|.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Both half-families plus the reality flag.
///
/// When `reality_locked` is true the minus family is t_{-k} = -conj(t_k),
/// which makes the one-body weight exp(xi(t_+, z) - xi(t_-, conj(z))) real
/// and positive.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeVector {
    pub plus: HalfTimeVector,
    pub minus: HalfTimeVector,
    pub reality_locked: bool,
}

impl TimeVector {
    /// Independent half-families, no reality constraint.
    pub fn new(plus: HalfTimeVector, minus: HalfTimeVector) -> Self {
        TimeVector {
            plus,
            minus,
            reality_locked: false,
        }
    }

    /// Derive the minus family from the reality condition t_{-k} = -conj(t_k).
    pub fn reality_locked(plus: HalfTimeVector) -> Self {
        let minus = plus.conjugated().negated();
        TimeVector {
            plus,
            minus,
            reality_locked: true,
        }
    }

    pub fn zero() -> Self {
        TimeVector {
            plus: HalfTimeVector::zero(),
            minus: HalfTimeVector::zero(),
            reality_locked: true,
        }
    }

    /// Does the stored minus family satisfy t_{-k} = -conj(t_k)?
    pub fn satisfies_reality(&self, tol: f64) -> bool {
        let k_max = self.plus.support().max(self.minus.support());
        (1..=k_max).all(|k| (self.minus.get(k) + self.plus.get(k).conj()).norm() <= tol)
    }

    /// Copy with t_1 shifted; the result is no longer reality-locked.
    pub fn shifted_t1(&self, delta: Complex64) -> Self {
        TimeVector {
            plus: self.plus.shifted(1, delta),
            minus: self.minus.clone(),
            reality_locked: false,
        }
    }

    /// Copy with t_{-1} shifted; the result is no longer reality-locked.
    pub fn shifted_tm1(&self, delta: Complex64) -> Self {
        TimeVector {
            plus: self.plus.clone(),
            minus: self.minus.shifted(1, delta),
            reality_locked: false,
        }
    }

    /// Copy with both shifts applied (stencil evaluation helper).
    pub fn shifted(&self, d_plus: Complex64, d_minus: Complex64) -> Self {
        TimeVector {
            plus: self.plus.shifted(1, d_plus),
            minus: self.minus.shifted(1, d_minus),
            reality_locked: false,
        }
    }

    pub fn norm_inf(&self) -> f64 {
        self.plus.norm_inf().max(self.minus.norm_inf())
    }

    /// sum_{k>=1} k * t_k * t_{-k}; the exponent of the soliton prefactor
    /// relating the Fredholm determinant to the bare tau-function.
    pub fn cross_term(&self) -> Complex64 {
        let k_max = self.plus.support().min(self.minus.support());
        (1..=k_max)
            .map(|k| (k as f64) * self.plus.get(k) * self.minus.get(k))
            .sum()
    }
}
