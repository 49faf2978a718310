//! Upper-unitriangular matrix groups over double-double reals, their
//! integer lattice, and fundamental-domain reduction.
//!
//! A dimension-`n` group element is stored as its strictly-upper entries in
//! superdiagonal-major order: all positions `(i, i+1)`, then `(i, i+2)`,
//! and so on. For the Heisenberg group (`n = 3`) that ordering is the usual
//! `(x, y, z)`. The group is `s`-step nilpotent with `s = n - 1`, every
//! one-parameter power `a^t` is defined for all real `t`, and Haar measure
//! on the quotient by the integer lattice is Lebesgue measure in the
//! fundamental-domain coordinates below.

use crate::dd::{self, Dd};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Entrywise tolerance for identity checks (2^-80).
pub const IDENTITY_EPS: f64 = 8.271806125530277e-25;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupError {
    DimMismatch { left: usize, right: usize },
    /// Lattice bookkeeping left the integer range.
    LatticeOverflow,
}

impl fmt::Display for GroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupError::DimMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            GroupError::LatticeOverflow => write!(f, "lattice entry overflowed i128"),
        }
    }
}

impl core::error::Error for GroupError {}

/// Number of strictly-upper positions of an n x n matrix.
pub fn upper_len(dim: usize) -> usize {
    dim * (dim - 1) / 2
}

/// Superdiagonal-major position list: (row, col) pairs.
pub fn positions(dim: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(upper_len(dim));
    for k in 1..dim {
        for i in 0..dim - k {
            out.push((i, i + k));
        }
    }
    out
}

fn pos_index(dim: usize, i: usize, j: usize) -> usize {
    // offset of superdiagonal k = j - i, then row index
    let k = j - i;
    let mut off = 0;
    for kk in 1..k {
        off += dim - kk;
    }
    off + i
}

/// Unitriangular matrix: implicit unit diagonal, strictly-upper entries in
/// double-double precision.
#[derive(Clone, Debug)]
pub struct GroupElement {
    dim: usize,
    entries: Vec<Dd>,
}

impl GroupElement {
    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 2, "group dimension must be at least 2");
        GroupElement {
            dim,
            entries: vec![dd::ZERO; upper_len(dim)],
        }
    }

    pub fn from_entries(dim: usize, entries: Vec<Dd>) -> Self {
        assert_eq!(entries.len(), upper_len(dim));
        GroupElement { dim, entries }
    }

    pub fn from_f64_entries(dim: usize, entries: &[f64]) -> Self {
        GroupElement::from_entries(dim, entries.iter().map(|&x| Dd::from_f64(x)).collect())
    }

    /// Heisenberg element with coordinates (x, y, z) at positions
    /// (1,2), (2,3), (1,3).
    pub fn heisenberg(x: f64, y: f64, z: f64) -> Self {
        GroupElement::from_f64_entries(3, &[x, y, z])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Dd] {
        &self.entries
    }

    /// Entry at matrix position (i, j), 0-based; 1 on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> Dd {
        if i == j {
            dd::ONE
        } else if i < j {
            self.entries[pos_index(self.dim, i, j)]
        } else {
            dd::ZERO
        }
    }

    fn set(&mut self, i: usize, j: usize, v: Dd) {
        debug_assert!(i < j);
        self.entries[pos_index(self.dim, i, j)] = v;
    }

    fn check_dim(&self, other: &GroupElement) -> Result<(), GroupError> {
        if self.dim != other.dim {
            Err(GroupError::DimMismatch {
                left: self.dim,
                right: other.dim,
            })
        } else {
            Ok(())
        }
    }

    /// Exact matrix product.
    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = GroupElement::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                // sum over i <= l <= j of self[i][l] * other[l][j]
                let mut acc = self.get(i, j) + other.get(i, j);
                for l in i + 1..j {
                    acc = acc + self.get(i, l) * other.get(l, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Inverse via the finite Neumann series of the strictly-upper part:
    /// `(I + N)^-1 = I - N + N^2 - ...`, exact at `n - 1` terms.
    pub fn inverse(&self) -> GroupElement {
        let n = self.dim;
        let nil = self.to_strict_upper();
        let mut acc = StrictUpper::zero(n);
        let mut power = nil.clone();
        let mut sign = -1.0;
        for _ in 1..n {
            acc = acc.add_scaled(&power, sign);
            power = power.mul(&nil);
            sign = -sign;
        }
        acc.to_group()
    }

    pub fn commutator(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        Ok(ab.mul(&ba.inverse())?)
    }

    fn to_strict_upper(&self) -> StrictUpper {
        StrictUpper {
            dim: self.dim,
            entries: self.entries.clone(),
        }
    }

    /// Largest absolute entry difference from the identity.
    pub fn distance_from_identity(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| libm::fabs(e.to_f64()))
            .fold(0.0, f64::max)
    }

    /// Largest absolute entry difference from another element.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| libm::fabs((*a - *b).to_f64()))
            .fold(0.0, f64::max)
    }

    /// Matrix logarithm: `log(I + N) = N - N^2/2 + N^3/3 - ...`, truncating
    /// exactly because `N^n = 0`. The 1/k coefficients are divided in
    /// double-double (1/3 already rounds in f64).
    pub fn log_nilpotent(&self) -> StrictUpper {
        let n = self.dim;
        let nil = self.to_strict_upper();
        let mut acc = StrictUpper::zero(n);
        let mut power = nil.clone();
        for k in 1..n {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let inv = dd::ONE / Dd::from_f64(sign * k as f64);
            acc = acc.add_scaled_dd(&power, inv);
            power = power.mul(&nil);
        }
        acc
    }
}

/// Strictly-upper-triangular matrix (a Lie-algebra element).
#[derive(Clone, Debug)]
pub struct StrictUpper {
    dim: usize,
    entries: Vec<Dd>,
}

impl StrictUpper {
    pub fn zero(dim: usize) -> Self {
        StrictUpper {
            dim,
            entries: vec![dd::ZERO; upper_len(dim)],
        }
    }

    pub fn from_entries(dim: usize, entries: Vec<Dd>) -> Self {
        assert_eq!(entries.len(), upper_len(dim));
        StrictUpper { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Dd] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Dd {
        if i < j {
            self.entries[pos_index(self.dim, i, j)]
        } else {
            dd::ZERO
        }
    }

    fn set(&mut self, i: usize, j: usize, v: Dd) {
        self.entries[pos_index(self.dim, i, j)] = v;
    }

    pub fn scale(&self, c: Dd) -> StrictUpper {
        StrictUpper {
            dim: self.dim,
            entries: self.entries.iter().map(|e| *e * c).collect(),
        }
    }

    fn add_scaled(&self, other: &StrictUpper, c: f64) -> StrictUpper {
        StrictUpper {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| *a + b.mul_f64(c))
                .collect(),
        }
    }

    fn add_scaled_dd(&self, other: &StrictUpper, c: Dd) -> StrictUpper {
        StrictUpper {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| *a + *b * c)
                .collect(),
        }
    }

    fn mul(&self, other: &StrictUpper) -> StrictUpper {
        let n = self.dim;
        let mut out = StrictUpper::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                let mut acc = dd::ZERO;
                for l in i + 1..j {
                    acc = acc + self.get(i, l) * other.get(l, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    fn to_group(&self) -> GroupElement {
        GroupElement {
            dim: self.dim,
            entries: self.entries.clone(),
        }
    }

    /// Matrix exponential `exp(M) = sum M^k / k!`, exact at `n - 1` terms.
    /// The inverse factorials are divided in double-double: 1/3! already
    /// rounds in f64.
    pub fn exp_nilpotent(&self) -> GroupElement {
        let n = self.dim;
        let mut acc = StrictUpper::zero(n);
        let mut power = self.clone();
        let mut fact = dd::ONE;
        for k in 1..n {
            fact = fact.mul_f64(k as f64);
            let inv = dd::ONE / fact;
            acc = StrictUpper {
                dim: n,
                entries: acc
                    .entries
                    .iter()
                    .zip(&power.entries)
                    .map(|(a, b)| *a + *b * inv)
                    .collect(),
            };
            power = power.mul(self);
        }
        acc.to_group()
    }
}

/// Integer lattice element: unitriangular with exact integer entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeElement {
    dim: usize,
    entries: Vec<i128>,
}

impl LatticeElement {
    pub fn identity(dim: usize) -> Self {
        LatticeElement {
            dim,
            entries: vec![0; upper_len(dim)],
        }
    }

    /// Elementary lattice element `I + m e_(i,j)`.
    pub fn elementary(dim: usize, i: usize, j: usize, m: i128) -> Self {
        let mut e = LatticeElement::identity(dim);
        e.entries[pos_index(dim, i, j)] = m;
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[i128] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i128 {
        if i == j {
            1
        } else if i < j {
            self.entries[pos_index(self.dim, i, j)]
        } else {
            0
        }
    }

    /// Exact integer product, loud on overflow.
    pub fn mul(&self, other: &LatticeElement) -> Result<LatticeElement, GroupError> {
        if self.dim != other.dim {
            return Err(GroupError::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = LatticeElement::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                let mut acc = self
                    .get(i, j)
                    .checked_add(other.get(i, j))
                    .ok_or(GroupError::LatticeOverflow)?;
                for l in i + 1..j {
                    let p = self
                        .get(i, l)
                        .checked_mul(other.get(l, j))
                        .ok_or(GroupError::LatticeOverflow)?;
                    acc = acc.checked_add(p).ok_or(GroupError::LatticeOverflow)?;
                }
                out.entries[pos_index(n, i, j)] = acc;
            }
        }
        Ok(out)
    }

    pub fn to_group(&self) -> GroupElement {
        GroupElement {
            dim: self.dim,
            entries: self.entries.iter().map(|&m| Dd::from_i128(m)).collect(),
        }
    }
}

/// Fundamental-domain coordinates: one value in `[0, 1)` per strictly-upper
/// position, superdiagonal-major.
#[derive(Clone, Debug, PartialEq)]
pub struct MalcevCoords {
    pub dim: usize,
    pub coords: Vec<f64>,
}

impl MalcevCoords {
    /// First-superdiagonal coordinates: the projection to the maximal
    /// factor torus (for unitriangular groups, the commutator subgroup is
    /// exactly "first superdiagonal zero").
    pub fn torus_projection(&self) -> &[f64] {
        &self.coords[..self.dim - 1]
    }
}

/// Reduces `g` to its fundamental-domain representative: returns coords `c`
/// and the lattice element `gamma` with `g * gamma` having entries `c`, all
/// in `[0, 1)`.
///
/// The sweep runs over superdiagonals from the first upward; multiplying on
/// the right by an elementary lattice element at position `(i, j)` only
/// touches column `j` in rows above `i`, i.e. strictly higher
/// superdiagonals, so a single pass suffices.
pub fn reduce_mod_lattice(g: &GroupElement) -> Result<(MalcevCoords, LatticeElement), GroupError> {
    let n = g.dim;
    let mut w = g.clone();
    let mut gamma = LatticeElement::identity(n);
    for k in 1..n {
        for i in 0..n - k {
            let j = i + k;
            let x = w.get(i, j);
            let floor = x.floor();
            if !floor.is_finite() || libm::fabs(floor.hi) >= 1.7e38 {
                return Err(GroupError::LatticeOverflow);
            }
            let m = floor_to_i128(floor);
            if m != 0 {
                // column update: w <- w * E_(i,j)(-m)
                let mdd = Dd::from_i128(m);
                w.set(i, j, x - mdd);
                for r in 0..i {
                    let v = w.get(r, j) - w.get(r, i) * mdd;
                    w.set(r, j, v);
                }
                gamma = gamma.mul(&LatticeElement::elementary(n, i, j, -m))?;
            }
            // Guard against -0 or a rounded-up 1.0.
            let cur = w.get(i, j);
            if cur.is_negative() {
                w.set(i, j, cur + dd::ONE);
                gamma = gamma.mul(&LatticeElement::elementary(n, i, j, 1))?;
                for r in 0..i {
                    let v = w.get(r, j) + w.get(r, i);
                    w.set(r, j, v);
                }
            } else if cur.hi >= 1.0 {
                w.set(i, j, cur - dd::ONE);
                gamma = gamma.mul(&LatticeElement::elementary(n, i, j, -1))?;
                for r in 0..i {
                    let v = w.get(r, j) - w.get(r, i);
                    w.set(r, j, v);
                }
            }
        }
    }
    let coords = MalcevCoords {
        dim: n,
        coords: w.entries.iter().map(|e| e.to_f64().max(0.0)).collect(),
    };
    Ok((coords, gamma))
}

fn floor_to_i128(f: Dd) -> i128 {
    // |f| < 1.7e38 guaranteed by the caller; both limbs are integral.
    f.hi as i128 + f.lo as i128
}

/// One-parameter subgroup through `a`: per-position polynomials in the
/// curve parameter, from `exp(s log a)`.
#[derive(Clone, Debug)]
pub struct OneParameterCurve {
    dim: usize,
    /// Coefficient of `s^k` (k = 1..=dim-1) at each position.
    coeffs: Vec<Vec<Dd>>,
}

pub fn one_parameter_curve(a: &GroupElement) -> OneParameterCurve {
    let n = a.dim;
    let l = a.log_nilpotent();
    // exp(s L) = I + sum_k s^k L^k / k!
    let mut coeffs = vec![vec![dd::ZERO; n - 1]; upper_len(n)];
    let mut power = l.clone();
    let mut fact = dd::ONE;
    for k in 1..n {
        fact = fact.mul_f64(k as f64);
        let inv = dd::ONE / fact;
        for (p, c) in coeffs.iter_mut().enumerate() {
            c[k - 1] = power.entries[p] * inv;
        }
        power = power.mul(&l);
    }
    OneParameterCurve { dim: n, coeffs }
}

impl OneParameterCurve {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficients of `s^1..s^(n-1)` at a strictly-upper position index.
    pub fn coeffs(&self, pos: usize) -> &[Dd] {
        &self.coeffs[pos]
    }

    /// Evaluates the curve at parameter `s` (compensated Horner).
    pub fn eval(&self, s: Dd) -> GroupElement {
        let entries = self
            .coeffs
            .iter()
            .map(|c| {
                let mut acc = dd::ZERO;
                for k in (0..c.len()).rev() {
                    acc = acc * s + c[k];
                }
                acc * s
            })
            .collect();
        GroupElement::from_entries(self.dim, entries)
    }
}

/// True iff all pairwise commutators are the identity to `2^-80` per entry.
pub fn check_commuting(elems: &[GroupElement]) -> bool {
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            match elems[i].commutator(&elems[j]) {
                Ok(c) => {
                    if c.distance_from_identity() > IDENTITY_EPS {
                        return false;
                    }
                }
                Err(_) => return false,
            }
        }
    }
    true
}

/// Nilpotency step of the dimension-n unitriangular group.
pub fn nilpotency_step(dim: usize) -> u32 {
    (dim as u32).saturating_sub(1)
}

/// Degree bound `r = (s+1)(M+1)` for an orbit on an `s`-step group whose
/// exponent degrees are at most `M`.
pub fn degree_upper_bound(s: u32, m: u32) -> u64 {
    (s as u64 + 1) * (m as u64 + 1)
}

/// Human-readable matrix (debugging aid).
pub fn format_element(g: &GroupElement) -> String {
    let mut s = String::new();
    for i in 0..g.dim {
        for j in 0..g.dim {
            s.push_str(&format!("{:>12.6} ", g.get(i, j).to_f64()));
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, eps: f64) -> bool {
        libm::fabs(a - b) <= eps
    }

    #[test]
    fn heisenberg_product_rule() {
        let g = GroupElement::heisenberg(1.0, 2.0, 3.0);
        let h = GroupElement::heisenberg(0.5, 0.25, 0.125);
        let p = g.mul(&h).unwrap();
        // H(a,b,c) * H(a',b',c') = H(a+a', b+b', c+c'+a*b')
        assert!(close(p.get(0, 1).to_f64(), 1.5, 1e-30));
        assert!(close(p.get(1, 2).to_f64(), 2.25, 1e-30));
        assert!(close(p.get(0, 2).to_f64(), 3.125 + 1.0 * 0.25, 1e-30));
    }

    #[test]
    fn heisenberg_commutator_is_central() {
        let a = GroupElement::heisenberg(1.0, 0.0, 0.0);
        let b = GroupElement::heisenberg(0.0, 1.0, 0.0);
        let c = a.commutator(&b).unwrap();
        assert!(close(c.get(0, 2).to_f64(), 1.0, 1e-30));
        assert!(close(c.get(0, 1).to_f64(), 0.0, 1e-30));
        assert!(close(c.get(1, 2).to_f64(), 0.0, 1e-30));
        assert_eq!(
            GroupElement::identity(3).inverse().distance_from_identity(),
            0.0
        );
    }

    #[test]
    fn log_of_heisenberg_element() {
        let g = GroupElement::heisenberg(1.0, 1.0, 0.0);
        let l = g.log_nilpotent();
        assert!(close(l.get(0, 1).to_f64(), 1.0, 1e-30));
        assert!(close(l.get(1, 2).to_f64(), 1.0, 1e-30));
        assert!(close(l.get(0, 2).to_f64(), -0.5, 1e-30));
        assert_eq!(
            StrictUpper::zero(3).exp_nilpotent().distance_from_identity(),
            0.0
        );
    }

    #[test]
    fn curve_of_shear() {
        let a = GroupElement::heisenberg(1.0, 1.0, 0.0);
        let c = one_parameter_curve(&a);
        // curve(s) = H(s, s, (s^2 - s)/2)
        let g = c.eval(Dd::from_f64(3.0));
        assert!(close(g.get(0, 1).to_f64(), 3.0, 1e-28));
        assert!(close(g.get(1, 2).to_f64(), 3.0, 1e-28));
        assert!(close(g.get(0, 2).to_f64(), (9.0 - 3.0) / 2.0, 1e-28));
        // curve(1) = a, curve(0) = identity
        assert!(c.eval(dd::ONE).distance(&a) < 1e-29);
        assert!(c.eval(dd::ZERO).distance_from_identity() < 1e-30);
    }

    #[test]
    fn reduce_already_reduced() {
        let g = GroupElement::heisenberg(0.25, 0.5, 0.75);
        let (c, gamma) = reduce_mod_lattice(&g).unwrap();
        assert_eq!(c.coords, vec![0.25, 0.5, 0.75]);
        assert_eq!(gamma, LatticeElement::identity(3));
    }

    #[test]
    fn reduce_matches_product() {
        // g * gamma must reproduce the reduced coordinates exactly.
        let g = GroupElement::heisenberg(1.5, 2.3, 0.7);
        let (c, gamma) = reduce_mod_lattice(&g).unwrap();
        let prod = g.mul(&gamma.to_group()).unwrap();
        for (p, v) in prod.entries().iter().zip(&c.coords) {
            assert!(close(p.to_f64(), *v, 1e-25));
            assert!(*v >= 0.0 && *v < 1.0);
        }
        assert!(close(c.coords[0], 0.5, 1e-30));
        assert!(close(c.coords[1], 0.3, 1e-13));
    }

    #[test]
    fn torus_projection_is_first_superdiagonal() {
        let g = GroupElement::heisenberg(0.3, 0.9, 0.1);
        let (c, _) = reduce_mod_lattice(&g).unwrap();
        assert_eq!(c.torus_projection(), &[0.3, 0.9]);
    }

    #[test]
    fn commuting_checks() {
        let a = GroupElement::heisenberg(1.0, 0.0, 0.0);
        let z = GroupElement::heisenberg(0.0, 0.0, 1.0);
        let b = GroupElement::heisenberg(0.0, 1.0, 0.0);
        assert!(check_commuting(&[a.clone(), z]));
        assert!(!check_commuting(&[a.clone(), b]));
        // one-parameter subgroup commutes with its generator
        let c = one_parameter_curve(&a);
        assert!(check_commuting(&[a, c.eval(Dd::from_f64(0.37))]));
    }

    #[test]
    fn degree_bound_values() {
        assert_eq!(degree_upper_bound(2, 2), 9);
        assert_eq!(degree_upper_bound(1, 1), 4);
        assert_eq!(degree_upper_bound(1, 3), 8);
        assert_eq!(nilpotency_step(3), 2);
    }
}
