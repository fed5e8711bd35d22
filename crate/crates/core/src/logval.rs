//! Complex numbers stored as (log-magnitude, phase).
//!
//! Partition functions of N-particle ensembles carry prefactors like
//! prod_{k<=N} Gamma(k), which overflow an f64 beyond N ~ 170. [`LogValue`]
//! represents exp(log_magnitude + i*phase) and supports the arithmetic the
//! evaluators need (products, quotients, sums, integer powers) without ever
//! materialising the magnitude.

use num_complex::Complex64;

/// A complex value exp(log_magnitude + i*phase).
///
/// Zero is represented by `log_magnitude = -inf` (phase 0). The phase is
/// kept in (-pi, pi]; for real values it is exactly 0.0 or pi, which doubles
/// as the sign bit.
#[derive(Clone, Copy, Debug)]
pub struct LogValue {
    pub log_magnitude: f64,
    pub phase: f64,
}

/// Wrap a phase into (-pi, pi].
fn wrap_phase(phi: f64) -> f64 {
    if phi.is_nan() {
        return 0.0;
    }
    let mut p = phi.rem_euclid(2.0 * std::f64::consts::PI);
    if p > std::f64::consts::PI {
        p -= 2.0 * std::f64::consts::PI;
    }
    p
}

impl LogValue {
    pub fn zero() -> Self {
        LogValue {
            log_magnitude: f64::NEG_INFINITY,
            phase: 0.0,
        }
    }

    pub fn one() -> Self {
        LogValue {
            log_magnitude: 0.0,
            phase: 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_magnitude == f64::NEG_INFINITY
    }

    /// Build from explicit log-magnitude and phase.
    pub fn from_ln_and_phase(ln_mag: f64, phase: f64) -> Self {
        if ln_mag == f64::NEG_INFINITY {
            return Self::zero();
        }
        LogValue {
            log_magnitude: ln_mag,
            phase: wrap_phase(phase),
        }
    }

    /// Positive real value given as its natural logarithm.
    pub fn from_ln(ln_mag: f64) -> Self {
        Self::from_ln_and_phase(ln_mag, 0.0)
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::zero()
        } else if x > 0.0 {
            Self::from_ln(x.ln())
        } else {
            Self::from_ln_and_phase((-x).ln(), std::f64::consts::PI)
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            return Self::zero();
        }
        Self::from_ln_and_phase(z.norm().ln(), z.arg())
    }

    /// The represented value as a plain complex number.
    ///
    /// Overflows to infinity (and underflows to zero) outside f64 range.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.log_magnitude.exp(), self.phase)
    }

    /// log of the value as a complex number: log_magnitude + i*phase.
    pub fn ln_complex(&self) -> Complex64 {
        Complex64::new(self.log_magnitude, self.phase)
    }

    /// Like [`ln_complex`](Self::ln_complex), but with the phase shifted by a
    /// multiple of 2*pi so it lies within pi of `reference_phase`. Finite
    /// differences of log tau across a stencil need a continuous branch.
    pub fn ln_complex_near(&self, reference_phase: f64) -> Complex64 {
        let mut phi = self.phase;
        let two_pi = 2.0 * std::f64::consts::PI;
        while phi - reference_phase > std::f64::consts::PI {
            phi -= two_pi;
        }
        while phi - reference_phase < -std::f64::consts::PI {
            phi += two_pi;
        }
        Complex64::new(self.log_magnitude, phi)
    }

    pub fn mul(&self, other: &LogValue) -> LogValue {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::from_ln_and_phase(
            self.log_magnitude + other.log_magnitude,
            self.phase + other.phase,
        )
    }

    pub fn div(&self, other: &LogValue) -> LogValue {
        if self.is_zero() {
            return Self::zero();
        }
        Self::from_ln_and_phase(
            self.log_magnitude - other.log_magnitude,
            self.phase - other.phase,
        )
    }

    pub fn powi(&self, k: i32) -> LogValue {
        if self.is_zero() {
            return if k == 0 { Self::one() } else { Self::zero() };
        }
        Self::from_ln_and_phase(
            self.log_magnitude * f64::from(k),
            self.phase * f64::from(k),
        )
    }

    pub fn neg(&self) -> LogValue {
        if self.is_zero() {
            return Self::zero();
        }
        Self::from_ln_and_phase(self.log_magnitude, self.phase + std::f64::consts::PI)
    }

    /// Complex addition, performed relative to the larger magnitude so that
    /// hugely scaled values stay accurate.
    pub fn add(&self, other: &LogValue) -> LogValue {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (big, small) = if self.log_magnitude >= other.log_magnitude {
            (self, other)
        } else {
            (other, self)
        };
        let ratio = Complex64::from_polar(
            (small.log_magnitude - big.log_magnitude).exp(),
            small.phase - big.phase,
        );
        let s = Complex64::new(1.0, 0.0) + ratio;
        big.mul(&Self::from_complex(s))
    }

    pub fn sub(&self, other: &LogValue) -> LogValue {
        self.add(&other.neg())
    }

    /// Magnitude ratio |self|/|other| as a plain f64 (may overflow).
    pub fn magnitude_ratio(&self, other: &LogValue) -> f64 {
        (self.log_magnitude - other.log_magnitude).exp()
    }

    /// True if the phase marks a real value (0 or pi) to within `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        let p = self.phase.abs();
        p < tol || (std::f64::consts::PI - p).abs() < tol
    }

    /// Sign of a real value: +1.0 (phase 0) or -1.0 (phase pi).
    pub fn real_sign(&self) -> f64 {
        if self.phase.abs() < std::f64::consts::FRAC_PI_2 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Relative difference |a - b| / (|a| + |b| + floor), evaluated after
/// factoring out the common magnitude scale. `floor` guards the fraction
/// when both values vanish.
pub fn relative_diff(a: &LogValue, b: &LogValue, floor: f64) -> f64 {
    if a.is_zero() && b.is_zero() {
        return 0.0;
    }
    let scale = a.log_magnitude.max(b.log_magnitude);
    let za = Complex64::from_polar((a.log_magnitude - scale).exp(), a.phase);
    let zb = Complex64::from_polar((b.log_magnitude - scale).exp(), b.phase);
    let denom = za.norm() + zb.norm() + floor * (-scale).exp();
    (za - zb).norm() / denom
}

impl std::ops::Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        LogValue::mul(&self, &rhs)
    }
}

impl std::ops::Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        LogValue::div(&self, &rhs)
    }
}

impl std::ops::Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        LogValue::add(&self, &rhs)
    }
}

impl std::ops::Sub for LogValue {
    type Output = LogValue;
    fn sub(self, rhs: LogValue) -> LogValue {
        LogValue::sub(&self, &rhs)
    }
}

/// Running sum of [`LogValue`]s (complex log-sum-exp).
#[derive(Clone, Copy, Debug)]
pub struct LogSum {
    total: LogValue,
}

impl LogSum {
    pub fn new() -> Self {
        LogSum {
            total: LogValue::zero(),
        }
    }

    pub fn push(&mut self, v: LogValue) {
        self.total = self.total.add(&v);
    }

    pub fn total(&self) -> LogValue {
        self.total
    }
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn close(a: Complex64, b: Complex64, tol: f64) {
        assert!(
            (a - b).norm() <= tol * (1.0 + a.norm() + b.norm()),
            "{a} vs {b}"
        );
    }

    #[test]
    fn roundtrip_and_arithmetic_match_complex() {
        let xs = [
            Complex64::new(2.5, -1.25),
            Complex64::new(-3.0, 0.0),
            Complex64::new(0.0, 4.0),
            Complex64::new(1e-8, -2e-7),
        ];
        for &a in &xs {
            for &b in &xs {
                let la = LogValue::from_complex(a);
                let lb = LogValue::from_complex(b);
                close(la.mul(&lb).to_complex(), a * b, 1e-12);
                close(la.div(&lb).to_complex(), a / b, 1e-12);
                close(la.add(&lb).to_complex(), a + b, 1e-12);
                close(la.sub(&lb).to_complex(), a - b, 1e-12);
            }
        }
    }

    #[test]
    fn addition_survives_huge_scales() {
        // exp(1000) + exp(999) = exp(1000) * (1 + 1/e)
        let a = LogValue::from_ln(1000.0);
        let b = LogValue::from_ln(999.0);
        let s = a.add(&b);
        assert_relative_eq!(
            s.log_magnitude,
            1000.0 + (1.0 + (-1.0f64).exp()).ln(),
            epsilon = 1e-13
        );
        assert_eq!(s.phase, 0.0);
    }

    #[test]
    fn zero_behaviour() {
        let z = LogValue::zero();
        let a = LogValue::from_real(3.0);
        assert!(z.is_zero());
        assert!(z.mul(&a).is_zero());
        assert!(a.mul(&z).is_zero());
        close(z.add(&a).to_complex(), Complex64::new(3.0, 0.0), 1e-14);
        assert!(a.sub(&a).is_zero() || a.sub(&a).log_magnitude < a.log_magnitude - 30.0);
    }

    #[test]
    fn relative_diff_is_scale_free() {
        let a = LogValue::from_ln(5000.0);
        let b = LogValue::from_ln_and_phase(5000.0 + (1.01f64).ln(), 0.0);
        let d = relative_diff(&a, &b, 1e-300);
        assert_relative_eq!(d, 0.01 / 2.01, epsilon = 1e-10);
        assert_eq!(relative_diff(&LogValue::zero(), &LogValue::zero(), 1e-300), 0.0);
    }

    #[test]
    fn real_sign_and_negation() {
        let a = LogValue::from_real(-2.0);
        assert_eq!(a.real_sign(), -1.0);
        assert!(a.is_real(1e-15));
        close(a.neg().to_complex(), Complex64::new(2.0, 0.0), 1e-14);
    }

    #[test]
    fn phase_unwrapping_near_reference() {
        let v = LogValue::from_ln_and_phase(0.0, 3.0);
        // stored phase is 3.0; nearest branch to -3.1 is 3.0 - 2pi
        let l = v.ln_complex_near(-3.1);
        assert_relative_eq!(l.im, 3.0 - 2.0 * std::f64::consts::PI, epsilon = 1e-14);
    }
}
