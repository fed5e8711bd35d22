//! Quadrature grids for Nystrom discretization of integral operators.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadRule {
    /// Uniform nodes on [0, 2 pi); spectrally accurate for periodic analytic
    /// integrands.
    PeriodicTrapezoid,
    /// Gauss-Legendre nodes mapped to a finite interval.
    GaussLegendre,
}

/// Nodes and positive weights of a quadrature rule.
#[derive(Clone, Debug)]
pub struct NystromGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub rule: QuadRule,
}

impl NystromGrid {
    pub fn periodic_trapezoid(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("need at least one node"));
        }
        let w = 2.0 * std::f64::consts::PI / m as f64;
        Ok(NystromGrid {
            nodes: (0..m).map(|j| w * j as f64).collect(),
            weights: vec![w; m],
            rule: QuadRule::PeriodicTrapezoid,
        })
    }

    /// m-point Gauss-Legendre rule on [a, b]. Nodes found by Newton
    /// iteration on the Legendre polynomial from the Chebyshev initial
    /// guess; accurate to machine precision for the m used here.
    pub fn gauss_legendre(m: usize, a: f64, b: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("need at least one node"));
        }
        if !(b > a) {
            return Err(Error::invalid("interval must satisfy a < b"));
        }
        let mut nodes = vec![0.0f64; m];
        let mut weights = vec![0.0f64; m];
        let nf = m as f64;
        for i in 0..m.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // Legendre recurrence for P_m(x) and P'_m(x)
                let mut p0 = 1.0f64;
                let mut p1 = x;
                for k in 2..=m {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = nf * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[m - 1 - i] = x;
            weights[i] = w;
            weights[m - 1 - i] = w;
        }
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        for i in 0..m {
            nodes[i] = mid + half * nodes[i];
            weights[i] *= half;
        }
        Ok(NystromGrid {
            nodes,
            weights,
            rule: QuadRule::GaussLegendre,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}
