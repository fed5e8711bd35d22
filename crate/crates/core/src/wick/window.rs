//! Finite mode windows, Fock states as bitmasks, and sparse mode operators.
//!
//! Modes m_min <= n < m_max are mapped to bits n - m_min of a basis-state
//! bitmask; bit set means occupied. The Dirac vacuum |0> has every
//! non-negative mode occupied and every negative mode empty, and the shifted
//! vacuum |n> has exactly the modes >= n occupied. Jordan-Wigner signs use
//! the fixed convention (-1)^(number of occupied modes with smaller index),
//! with modes ordered ascending, so all bitmask-level results are
//! reproducible.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Maximum window width: 2^14 basis states.
pub const MAX_WINDOW_MODES: i32 = 14;

/// A contiguous range of fermion modes m_min <= n < m_max.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockWindow {
    m_min: i32,
    m_max: i32,
}

impl FockWindow {
    pub fn new(m_min: i32, m_max: i32) -> Result<Self> {
        if m_max <= m_min {
            return Err(Error::invalid("window must contain at least one mode"));
        }
        if m_max - m_min > MAX_WINDOW_MODES {
            return Err(Error::invalid(format!(
                "window width {} exceeds the cap {MAX_WINDOW_MODES}",
                m_max - m_min
            )));
        }
        Ok(FockWindow { m_min, m_max })
    }

    pub fn m_min(&self) -> i32 {
        self.m_min
    }

    pub fn m_max(&self) -> i32 {
        self.m_max
    }

    /// Number of modes D.
    pub fn num_modes(&self) -> usize {
        (self.m_max - self.m_min) as usize
    }

    /// Dimension 2^D of the Fock space.
    pub fn dim(&self) -> usize {
        1usize << self.num_modes()
    }

    pub fn contains(&self, mode: i32) -> bool {
        mode >= self.m_min && mode < self.m_max
    }

    pub fn modes(&self) -> impl Iterator<Item = i32> {
        self.m_min..self.m_max
    }

    fn bit(&self, mode: i32) -> usize {
        debug_assert!(self.contains(mode));
        (mode - self.m_min) as usize
    }

    /// Basis index of the shifted Dirac vacuum |n>: modes >= n occupied.
    ///
    /// Requires the modes between 0 and n (exclusive of the larger) to lie in
    /// the window, since |n> is built from |0> by that many mode operators.
    pub fn shifted_vacuum(&self, n: i32) -> Result<usize> {
        let (lo, hi) = if n >= 0 { (0, n) } else { (n, 0) };
        if n != 0 && !(self.contains(lo) && self.contains(hi - 1)) {
            return Err(Error::invalid(format!(
                "shifted vacuum |{n}> needs modes {lo}..{hi} inside the window"
            )));
        }
        let mut mask = 0usize;
        for mode in self.modes() {
            if mode >= n {
                mask |= 1 << self.bit(mode);
            }
        }
        Ok(mask)
    }

    /// The plain Dirac vacuum |0>.
    pub fn vacuum(&self) -> usize {
        self.shifted_vacuum(0).expect("|0> always representable")
    }

    /// Basis vector for a state index.
    pub fn basis_vector(&self, index: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        v[index] = Complex64::new(1.0, 0.0);
        v
    }
}

/// A sparse operator on the window Fock space, stored column-major:
/// `cols[j]` lists the (row, value) entries of A e_j.
#[derive(Clone, Debug)]
pub struct FockOperator {
    dim: usize,
    cols: Vec<Vec<(usize, Complex64)>>,
}

impl FockOperator {
    pub fn zero(dim: usize) -> Self {
        FockOperator {
            dim,
            cols: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zero(dim);
        for j in 0..dim {
            op.cols[j].push((j, Complex64::new(1.0, 0.0)));
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn push_sorted(entries: &mut Vec<(usize, Complex64)>, row: usize, val: Complex64) {
        match entries.binary_search_by(|e| e.0.cmp(&row)) {
            Ok(pos) => {
                entries[pos].1 += val;
                if entries[pos].1 == Complex64::new(0.0, 0.0) {
                    entries.remove(pos);
                }
            }
            Err(pos) => entries.insert(pos, (row, val)),
        }
    }

    /// A * v for a column vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (j, col) in self.cols.iter().enumerate() {
            let x = v[j];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for &(row, val) in col {
                out[row] += val * x;
            }
        }
        out
    }

    /// r * A for a row vector (no conjugation).
    pub fn apply_row(&self, r: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(r.len(), self.dim);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (j, col) in self.cols.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(row, val) in col {
                acc += r[row] * val;
            }
            out[j] = acc;
        }
        out
    }

    /// Matrix product self * other.
    pub fn mul(&self, other: &FockOperator) -> FockOperator {
        assert_eq!(self.dim, other.dim);
        let mut out = FockOperator::zero(self.dim);
        for j in 0..self.dim {
            let mut col: Vec<(usize, Complex64)> = Vec::new();
            for &(mid, v_other) in &other.cols[j] {
                for &(row, v_self) in &self.cols[mid] {
                    Self::push_sorted(&mut col, row, v_self * v_other);
                }
            }
            out.cols[j] = col;
        }
        out
    }

    pub fn add(&self, other: &FockOperator) -> FockOperator {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for j in 0..self.dim {
            for &(row, val) in &other.cols[j] {
                Self::push_sorted(&mut out.cols[j], row, val);
            }
        }
        out
    }

    pub fn sub(&self, other: &FockOperator) -> FockOperator {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> FockOperator {
        let mut out = self.clone();
        for col in out.cols.iter_mut() {
            for e in col.iter_mut() {
                e.1 *= factor;
            }
        }
        out
    }

    /// Largest entry magnitude of self - other: the exactness metric used by
    /// the operator-identity tests.
    pub fn max_abs_diff(&self, other: &FockOperator) -> f64 {
        let d = self.sub(other);
        d.cols
            .iter()
            .flat_map(|col| col.iter().map(|e| e.1.norm()))
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// Replace a column with pre-sorted (row, value) entries.
    pub(crate) fn set_column(&mut self, col: usize, entries: Vec<(usize, Complex64)>) {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        self.cols[col] = entries;
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }
}

/// The table of window mode operators psi_n, psi*_n.
pub struct ModeOperators {
    window: FockWindow,
    psi: Vec<FockOperator>,
    psi_star: Vec<FockOperator>,
}

/// Build every psi_n, psi*_n in the window as explicit sparse matrices with
/// the Jordan-Wigner sign convention fixed above.
pub fn build_mode_operators(window: &FockWindow) -> ModeOperators {
    let dim = window.dim();
    let d = window.num_modes();
    let mut psi = Vec::with_capacity(d);
    let mut psi_star = Vec::with_capacity(d);
    for bit in 0..d {
        let mut a = FockOperator::zero(dim);
        let mut c = FockOperator::zero(dim);
        let mask = 1usize << bit;
        let below = mask - 1;
        for state in 0..dim {
            let sign = if (state & below).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            if state & mask != 0 {
                // annihilation: occupied -> empty
                a.cols[state].push((state & !mask, Complex64::new(sign, 0.0)));
            } else {
                // creation: empty -> occupied
                c.cols[state].push((state | mask, Complex64::new(sign, 0.0)));
            }
        }
        psi.push(a);
        psi_star.push(c);
    }
    ModeOperators {
        window: *window,
        psi,
        psi_star,
    }
}

impl ModeOperators {
    pub fn window(&self) -> &FockWindow {
        &self.window
    }

    pub fn psi(&self, mode: i32) -> &FockOperator {
        assert!(self.window.contains(mode), "mode {mode} outside window");
        &self.psi[(mode - self.window.m_min()) as usize]
    }

    pub fn psi_star(&self, mode: i32) -> &FockOperator {
        assert!(self.window.contains(mode), "mode {mode} outside window");
        &self.psi_star[(mode - self.window.m_min()) as usize]
    }

    /// Truncated field psi_+(z) = sum_{n >= 0, n in window} z^n psi_n.
    pub fn psi_plus(&self, z: Complex64) -> FockOperator {
        let mut op = FockOperator::zero(self.window.dim());
        for mode in self.window.modes().filter(|&m| m >= 0) {
            op = op.add(&self.psi(mode).scale(z.powi(mode)));
        }
        op
    }

    /// Truncated field psi*_+(1/conj(z)) = sum_{n >= 0, n in window} conj(z)^n psi*_n.
    pub fn psi_star_plus_image(&self, z: Complex64) -> FockOperator {
        let mut op = FockOperator::zero(self.window.dim());
        for mode in self.window.modes().filter(|&m| m >= 0) {
            op = op.add(&self.psi_star(mode).scale(z.conj().powi(mode)));
        }
        op
    }
}

/// The window restrictions of the singular projectors
/// P_+ = prod_{i<0} psi_i psi*_i and P_- = prod_{i>=0} psi*_i psi_i,
/// built from the explicit mode matrices.
pub fn projectors(ops: &ModeOperators) -> (FockOperator, FockOperator) {
    let dim = ops.window().dim();
    let mut p_plus = FockOperator::identity(dim);
    let mut p_minus = FockOperator::identity(dim);
    for mode in ops.window().modes() {
        if mode < 0 {
            p_plus = p_plus.mul(&ops.psi(mode).mul(ops.psi_star(mode)));
        } else {
            p_minus = p_minus.mul(&ops.psi_star(mode).mul(ops.psi(mode)));
        }
    }
    (p_plus, p_minus)
}

/// Build |n> by literally applying the defining operator string to |0>
/// (psi_{n-1}...psi_0 for n > 0, psi*_n...psi*_{-1} for n < 0) and check it
/// lands on a single basis state. Returns (basis index, sign).
pub fn shifted_vacuum_ket(ops: &ModeOperators, n: i32) -> Result<(usize, f64)> {
    let window = ops.window();
    window.shifted_vacuum(n)?; // validates the needed mode range
    let mut v = window.basis_vector(window.vacuum());
    if n > 0 {
        for mode in 0..n {
            v = ops.psi(mode).apply(&v); // rightmost psi_0 acts first
        }
    } else {
        for mode in (n..0).rev() {
            v = ops.psi_star(mode).apply(&v); // rightmost psi*_{-1} acts first
        }
    }
    single_component(&v, window)
}

/// Build the dual <n| = <0| psi*_0 psi*_1 ... psi*_{n-1} (and the n < 0
/// analogue) as a row vector and identify its basis index and sign.
pub fn shifted_vacuum_bra(ops: &ModeOperators, n: i32) -> Result<(usize, f64)> {
    let window = ops.window();
    window.shifted_vacuum(n)?; // validates the needed mode range
    let mut r = window.basis_vector(window.vacuum());
    if n > 0 {
        for mode in 0..n {
            r = ops.psi_star(mode).apply_row(&r); // leftmost psi*_0 applied first
        }
    } else {
        for mode in (n..0).rev() {
            r = ops.psi(mode).apply_row(&r);
        }
    }
    single_component(&r, window)
}

fn single_component(v: &[Complex64], window: &FockWindow) -> Result<(usize, f64)> {
    let mut found = None;
    for (i, &x) in v.iter().enumerate() {
        if x != Complex64::new(0.0, 0.0) {
            if found.is_some() {
                return Err(Error::invalid("state is not a single basis vector"));
            }
            found = Some((i, x.re));
        }
    }
    match found {
        Some((i, s)) if s.abs() == 1.0 => Ok((i, s)),
        _ => Err(Error::invalid(format!(
            "shifted vacuum needs modes outside the window [{}, {})",
            window.m_min(),
            window.m_max()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(a: i32, b: i32) -> FockWindow {
        FockWindow::new(a, b).unwrap()
    }

    #[test]
    fn window_validation() {
        assert!(FockWindow::new(0, 0).is_err());
        assert!(FockWindow::new(-8, 8).is_err()); // 16 > 14
        assert!(FockWindow::new(-2, 2).is_ok());
    }

    #[test]
    fn anticommutators_exact() {
        let w = window(-2, 3);
        let ops = build_mode_operators(&w);
        let dim = w.dim();
        let id = FockOperator::identity(dim);
        for n in w.modes() {
            for m in w.modes() {
                let a = ops.psi(n);
                let cs = ops.psi_star(m);
                let anti = a.mul(cs).add(&cs.mul(a));
                let expect = if n == m {
                    id.clone()
                } else {
                    FockOperator::zero(dim)
                };
                assert_eq!(anti.max_abs_diff(&expect), 0.0, "{{psi_{n}, psi*_{m}}}");
                let b = ops.psi(m);
                let aa = a.mul(b).add(&b.mul(a));
                assert!(aa.is_zero(), "{{psi_{n}, psi_{m}}}");
                let cs2 = ops.psi_star(n);
                let cc = cs2.mul(&cs.mul(&id)).add(&cs.mul(&cs2.mul(&id)));
                assert!(cc.is_zero(), "{{psi*_{n}, psi*_{m}}}");
            }
        }
    }

    #[test]
    fn psi_squares_to_zero() {
        let w = window(-1, 2);
        let ops = build_mode_operators(&w);
        for n in w.modes() {
            assert!(ops.psi(n).mul(ops.psi(n)).is_zero());
            assert!(ops.psi_star(n).mul(ops.psi_star(n)).is_zero());
        }
    }

    #[test]
    fn vacuum_pairing_rules() {
        let w = window(-2, 2);
        let ops = build_mode_operators(&w);
        let vac = w.basis_vector(w.vacuum());
        // <0| psi_n psi*_m |0> = delta_{nm} for m < 0, 0 for m >= 0
        for n in w.modes() {
            for m in w.modes() {
                let v = ops.psi(n).apply(&ops.psi_star(m).apply(&vac));
                let amp = vac.iter().zip(&v).map(|(a, b)| a * b).sum::<Complex64>();
                let expect = if n == m && m < 0 { 1.0 } else { 0.0 };
                assert_eq!(amp, Complex64::new(expect, 0.0), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn shifted_vacua_are_orthonormal_basis_states() {
        let w = window(-2, 2);
        let ops = build_mode_operators(&w);
        for n in -2..=2 {
            let (ket, ks) = shifted_vacuum_ket(&ops, n).unwrap();
            let (bra, bs) = shifted_vacuum_bra(&ops, n).unwrap();
            assert_eq!(ket, bra, "n={n}");
            assert_eq!(ket, w.shifted_vacuum(n).unwrap());
            // <n|n> = ks * bs on the shared basis state
            assert_eq!(ks * bs, 1.0, "n={n}");
        }
        // orthogonality is automatic for distinct basis indices
        let idx: Vec<usize> = (-2..=2)
            .map(|n| w.shifted_vacuum(n).unwrap())
            .collect();
        for i in 0..idx.len() {
            for j in (i + 1)..idx.len() {
                assert_ne!(idx[i], idx[j]);
            }
        }
    }

    #[test]
    fn shifted_vacuum_needs_window_modes() {
        let w = window(-1, 2);
        let ops = build_mode_operators(&w);
        assert!(shifted_vacuum_ket(&ops, 3).is_err());
        assert!(shifted_vacuum_ket(&ops, -2).is_err());
    }

    #[test]
    fn projector_properties() {
        let w = window(-2, 2);
        let ops = build_mode_operators(&w);
        let (pp, pm) = projectors(&ops);
        // P_+^2 = P_+, P_-^2 = P_-
        assert_eq!(pp.mul(&pp).max_abs_diff(&pp), 0.0);
        assert_eq!(pm.mul(&pm).max_abs_diff(&pm), 0.0);
        // P_+ psi*_k = psi_k P_+ = 0 for k < 0; commutes with k >= 0
        for k in w.modes() {
            if k < 0 {
                assert!(pp.mul(ops.psi_star(k)).is_zero(), "P+ psi*_{k}");
                assert!(ops.psi(k).mul(&pp).is_zero(), "psi_{k} P+");
            } else {
                assert_eq!(
                    pp.mul(ops.psi_star(k)).max_abs_diff(&ops.psi_star(k).mul(&pp)),
                    0.0
                );
                assert_eq!(pp.mul(ops.psi(k)).max_abs_diff(&ops.psi(k).mul(&pp)), 0.0);
            }
            // P_- kills positive creation modes on the right, positive
            // annihilation modes on the left, and commutes with k < 0.
            if k >= 0 {
                assert!(pm.mul(ops.psi(k)).is_zero(), "P- psi_{k}");
                assert!(ops.psi_star(k).mul(&pm).is_zero(), "psi*_{k} P-");
            } else {
                assert_eq!(
                    pm.mul(ops.psi_star(k)).max_abs_diff(&ops.psi_star(k).mul(&pm)),
                    0.0
                );
                assert_eq!(pm.mul(ops.psi(k)).max_abs_diff(&ops.psi(k).mul(&pm)), 0.0);
            }
        }
    }

    #[test]
    fn projectors_select_shifted_vacua() {
        let w = window(-2, 2);
        let ops = build_mode_operators(&w);
        let (pp, pm) = projectors(&ops);
        for n in -2..=2i32 {
            let v = w.basis_vector(w.shifted_vacuum(n).unwrap());
            let vp = pp.apply(&v);
            let vm = pm.apply(&v);
            let norm_p: f64 = vp.iter().map(|x| x.norm_sqr()).sum();
            let norm_m: f64 = vm.iter().map(|x| x.norm_sqr()).sum();
            // P_+ fixes |n> iff no negative mode is occupied (n >= 0);
            // P_- fixes |n> iff every non-negative mode is occupied (n <= 0).
            // Both projectors fix |0>.
            if n >= 0 {
                assert_eq!(norm_p, 1.0, "P+|{n}>");
            } else {
                assert_eq!(norm_p, 0.0, "P+|{n}>");
            }
            if n <= 0 {
                assert_eq!(norm_m, 1.0, "P-|{n}>");
            } else {
                assert_eq!(norm_m, 0.0, "P-|{n}>");
            }
        }
    }
}
