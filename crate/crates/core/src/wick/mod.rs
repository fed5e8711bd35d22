//! Exact finite-window free-fermion engine.
//!
//! Everything the determinant formulas rest on is rebuilt here concretely:
//! fermion modes on a finite window act on 2^D occupation bitmasks as sparse
//! signed matrices, so the anticommutation relations, projector identities,
//! Wick determinants and the operator form of the tau-function can all be
//! checked exactly (small-integer arithmetic) or to 1e-12 (time-dependent
//! exponentials), including leak detection under window enlargement.

mod bilinear;
mod tau_check;
mod vev;
mod window;

pub use bilinear::{
    current_minus, current_plus, exp_apply, exp_apply_row, exp_bilinear, exp_number_conserving,
};
pub use tau_check::{tau_operator_vs_integral, window_drift, OperatorVsIntegral};
pub use vev::{
    combo_operator, contraction, contraction_matrix, vacuum_expectation_fock, vev_fields_product,
    wick_determinant, PsiCombo, PsiStarCombo, VevForms,
};
pub use window::{
    build_mode_operators, projectors, shifted_vacuum_bra, shifted_vacuum_ket, FockOperator,
    FockWindow, ModeOperators, MAX_WINDOW_MODES,
};
