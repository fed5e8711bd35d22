//! Background measures d_mu for the canonical N-fold integrals.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::sync::Arc;

/// The background measure d_mu(z) of the canonical ensemble.
#[derive(Clone)]
pub enum MeasureSpec {
    /// d_mu = exp(-c |z|^2) d^2z with c > 0.
    RadialGaussian { c: f64 },
    /// Uniform angular measure d_theta / (2 pi) on the circle |z| = radius.
    ///
    /// At radius 1 this is exactly the contour measure dz/(2 pi i z) of the
    /// unitary-ensemble form, so Monte Carlo on this measure cross-checks
    /// the Toeplitz determinant.
    Circle { radius: f64 },
    /// Atomic measure sum_i w_i delta(z - z_i) with positive weights.
    Discrete {
        points: Vec<Complex64>,
        weights: Vec<f64>,
    },
    /// d_mu = exp(-U(|z|)) d^2z for a caller-supplied radial profile.
    ///
    /// Carried for moment quadrature; the Monte Carlo sampler has no
    /// proposal for it and rejects it.
    RadialCustom {
        u: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl std::fmt::Debug for MeasureSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeasureSpec::RadialGaussian { c } => write!(f, "RadialGaussian {{ c: {c} }}"),
            MeasureSpec::Circle { radius } => write!(f, "Circle {{ radius: {radius} }}"),
            MeasureSpec::Discrete { points, weights } => f
                .debug_struct("Discrete")
                .field("points", points)
                .field("weights", weights)
                .finish(),
            MeasureSpec::RadialCustom { .. } => write!(f, "RadialCustom {{ .. }}"),
        }
    }
}

impl MeasureSpec {
    pub fn radial_gaussian(c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::invalid("Gaussian measure requires c > 0"));
        }
        Ok(MeasureSpec::RadialGaussian { c })
    }

    pub fn circle(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::invalid("circle measure requires radius > 0"));
        }
        Ok(MeasureSpec::Circle { radius })
    }

    pub fn discrete(points: Vec<Complex64>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::invalid(
                "discrete measure needs one weight per point",
            ));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::invalid("discrete measure weights must be positive"));
        }
        Ok(MeasureSpec::Discrete { points, weights })
    }

    pub fn radial_custom(u: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        MeasureSpec::RadialCustom { u: Arc::new(u) }
    }
}
