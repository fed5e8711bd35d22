//! Grand canonical ensembles with an ideal conductor.
//!
//! A disk-shaped conductor reflects each particle at z to an image at
//! 1/conj(z); summing over particle number turns the grand partition
//! function into a Fredholm determinant whose kernel lives on the support
//! circle |z| = e^epsilon ([`disk`]). Replacing the disk by the lower
//! half-plane (images at conj(z)) gives the KP variant on the line
//! Im z = epsilon ([`halfplane`]). Both are discretized by Nystrom grids
//! and cross-checked against direct tensor-quadrature expansion terms.

mod disk;
mod halfplane;
mod nystrom;

pub use disk::{
    chemical_potential, fredholm_circle_family, fredholm_det_circle, fredholm_kernel_circle,
    fredholm_series_remainder_bound, grand_expansion_circle, image_energy_weight, omega,
    potential_v, DiskEnsembleSpec,
};
pub use halfplane::{fredholm_det_halfplane, halfplane_first_order, HalfPlaneEnsembleSpec};
pub use nystrom::{NystromGrid, QuadRule};

use crate::logval::LogValue;

/// A Nystrom determinant together with its reliability diagnostics.
#[derive(Clone, Copy, Debug)]
pub struct FredholmResult {
    pub value: LogValue,
    /// Relative change of the determinant under M -> 2M grid refinement.
    pub refinement_delta: f64,
    /// Estimated error from truncating an unbounded support (zero for the
    /// circle, damping-tail estimate for the line).
    pub truncation_estimate: f64,
    /// False flags a result whose diagnostics exceed tolerance; callers
    /// surface this rather than silently trusting the number.
    pub converged: bool,
}
