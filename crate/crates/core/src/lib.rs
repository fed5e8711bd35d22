//! Numerical tau-functions for two-dimensional Coulomb (Dyson) gases.
//!
//! The canonical partition function of N identical 2D Coulomb charges at
//! inverse temperature beta = 2 is a tau-function of the 2D Toda lattice
//! hierarchy in the coupling constants of the background potential; grand
//! canonical ensembles in the presence of an ideal conductor are Fredholm
//! determinants with the same integrable structure. This crate evaluates
//! these objects through several independent routes and cross-checks them:
//!
//! - [`schur`]: partitions, the elementary polynomials p_k and Schur
//!   functions via Jacobi-Trudi determinants;
//! - [`canonical`]: the Gaussian-measure Schur expansion, the
//!   Toeplitz-determinant form for circle-supported measures, Monte Carlo
//!   and tensor-quadrature evaluators of the N-fold integrals, and a
//!   finite-difference checker for the lowest Hirota bilinear identity;
//! - [`grand`]: Fredholm determinants for the disk-exterior (2D Toda) and
//!   half-plane (KP) grand canonical ensembles with ideal-conductor images;
//! - [`wick`]: an exact finite-window free-fermion engine (Fock states as
//!   bitmasks, mode operators as sparse matrices) that verifies the
//!   operator identities behind the determinant formulas;
//! - [`dispersionless`]: harmonic moments, electrostatic energies of
//!   droplets and fat slits, and the large-N asymptotics of log tau.
//!
//! Partition-function values grow factorially with N, so every evaluator
//! returns a [`LogValue`] carrying (log-magnitude, phase) instead of a raw
//! complex number.

pub mod canonical;
pub mod dispersionless;
pub mod error;
pub mod grand;
mod linalg;
pub mod logval;
pub mod measure;
pub mod schur;
pub mod times;
pub mod wick;

pub use error::{Error, Result};
pub use logval::LogValue;
pub use measure::MeasureSpec;
pub use schur::YoungDiagram;
pub use times::{HalfTimeVector, TimeVector};
