//! Gel'fand-Zetlin patterns for the even subalgebra gl(2) + gl(1) and the
//! reduced basis of the induced module.
//!
//! A reduced basis vector is a three-row pattern
//!
//! ```text
//! [ m13  m23  m33 ]
//! [ m12  m22  m32 ]
//! [ m11   0   m31 ]   with m31 = m32
//! ```
//!
//! tagged with the index `k` of the even submodule `V_k` it lives in. The
//! first row is the global highest weight, the second row the local highest
//! weight of `V_k`, and `m11` runs from `m12` down to `m22`.
//!
//! The second row of `V_3` is `[m13 - 1, m23 - 1, m33 + 2]`. That is what
//! the weight bookkeeping requires: both odd lowering operators act once, one
//! lowering `E11`, the other `E22`, and it is the only choice that gives
//! `dim W = 4 (m13 - m23 + 1)`. The alternative reading `[m13, m23, m33 + 2]`
//! is inconsistent with the explicit `V_3` patterns and is not used.

use std::fmt;

use crate::error::{KacError, Result};

/// Largest distance from an integer still accepted as integral.
const INTEGRALITY_SLACK: f64 = 1e-9;

fn as_nonnegative_integer(x: f64) -> Option<usize> {
    let r = x.round();
    ((x - r).abs() <= INTEGRALITY_SLACK && r >= 0.0).then_some(r as usize)
}

/// Signature `[m13, m23, m33]` of the induced module `W([m])`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HighestWeight {
    pub m13: f64,
    pub m23: f64,
    pub m33: f64,
}

impl HighestWeight {
    pub fn new(m13: f64, m23: f64, m33: f64) -> Result<Self> {
        if !(m13.is_finite() && m23.is_finite() && m33.is_finite()) {
            return Err(KacError::InvalidWeight(format!("[{m13}, {m23}, {m33}] is not finite")));
        }
        if as_nonnegative_integer(m13 - m23).is_none() {
            return Err(KacError::InvalidWeight(format!(
                "m13 - m23 = {} must be a non-negative integer",
                m13 - m23
            )));
        }
        Ok(Self { m13, m23, m33 })
    }

    /// Dimension `d = m13 - m23 + 1` of the gl(2) part of `V_0`.
    pub fn width(&self) -> usize {
        as_nonnegative_integer(self.m13 - self.m23).expect("validated on construction") + 1
    }

    /// `l = (m13 - m23) / 2`.
    pub fn l(&self) -> f64 {
        0.5 * (self.m13 - self.m23)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.m13, self.m23, self.m33]
    }

    /// Total dimension of the induced module.
    pub fn module_dim(&self) -> usize {
        4 * self.width()
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.m13, self.m23, self.m33)
    }
}

/// Index `k` of the even submodule `V_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Submodule {
    V0,
    V1,
    V2,
    V3,
}

impl Submodule {
    pub const ALL: [Submodule; 4] = [Submodule::V0, Submodule::V1, Submodule::V2, Submodule::V3];

    pub fn from_index(k: i64) -> Result<Self> {
        match k {
            0 => Ok(Self::V0),
            1 => Ok(Self::V1),
            2 => Ok(Self::V2),
            3 => Ok(Self::V3),
            other => Err(KacError::Range(other)),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// `V_1` and `V_2` carry one odd lowering operator, `V_0` and `V_3` zero or two.
    pub fn is_odd(self) -> bool {
        matches!(self, Self::V1 | Self::V2)
    }

    /// Shift of the second row relative to the first.
    fn shift(self) -> [f64; 3] {
        match self {
            Self::V0 => [0.0, 0.0, 0.0],
            Self::V1 => [0.0, -1.0, 1.0],
            Self::V2 => [-1.0, 0.0, 1.0],
            Self::V3 => [-1.0, -1.0, 2.0],
        }
    }
}

impl fmt::Display for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}", self.index())
    }
}

/// Local highest weight `[m]_k` of `V_k`.
pub fn signature_shift(hw: &HighestWeight, k: i64) -> Result<[f64; 3]> {
    Ok(shifted(hw, Submodule::from_index(k)?))
}

fn shifted(hw: &HighestWeight, k: Submodule) -> [f64; 3] {
    let s = k.shift();
    [hw.m13 + s[0], hw.m23 + s[1], hw.m33 + s[2]]
}

/// Number of patterns in `V_k`: `d`, `d + 1`, `d - 1`, `d` for `k = 0..3`.
pub fn submodule_width(hw: &HighestWeight, k: Submodule) -> usize {
    let d = hw.width();
    match k {
        Submodule::V0 | Submodule::V3 => d,
        Submodule::V1 => d + 1,
        Submodule::V2 => d - 1,
    }
}

/// One reduced basis vector `(m)_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GzVector {
    top: HighestWeight,
    k: Submodule,
    mid: [f64; 3],
    m11: f64,
    /// `m12 - m11`
    depth: usize,
}

impl GzVector {
    /// Pattern of `V_k` with the given `m11`; checks betweenness.
    pub fn new(top: HighestWeight, k: Submodule, m11: f64) -> Result<Self> {
        let mid = shifted(&top, k);
        let upper = as_nonnegative_integer(mid[0] - m11);
        let lower = as_nonnegative_integer(m11 - mid[1]);
        match (upper, lower) {
            (Some(depth), Some(_)) => Ok(Self { top, k, mid, m11, depth }),
            _ => Err(KacError::InvalidPattern(format!(
                "m11 = {m11} is not between m12 = {} and m22 = {} in {k} of {top}",
                mid[0], mid[1]
            ))),
        }
    }

    fn at_depth(top: HighestWeight, k: Submodule, depth: usize) -> Self {
        let mid = shifted(&top, k);
        Self { top, k, mid, m11: mid[0] - depth as f64, depth }
    }

    pub fn top(&self) -> &HighestWeight {
        &self.top
    }

    pub fn k(&self) -> Submodule {
        self.k
    }

    /// Second row `[m12, m22, m32]`.
    pub fn mid(&self) -> [f64; 3] {
        self.mid
    }

    pub fn m11(&self) -> f64 {
        self.m11
    }

    pub fn m31(&self) -> f64 {
        self.mid[2]
    }

    /// `m12 - m11`, the number of `E21` steps below the local highest weight.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Same submodule, `m11` shifted by `delta`; `None` outside the pattern range.
    pub fn shift_m11(&self, delta: i64) -> Option<Self> {
        let depth = self.depth as i64 - delta;
        let width = submodule_width(&self.top, self.k) as i64;
        (0..width).contains(&depth).then(|| Self::at_depth(self.top, self.k, depth as usize))
    }

    /// Same `m11` and first row, different submodule; `None` if out of range.
    pub fn with_submodule(&self, k: Submodule) -> Option<Self> {
        GzVector::new(self.top, k, self.m11).ok().filter(|v| v.depth < submodule_width(&self.top, k))
    }

    /// Eigenvalues of `E11`, `E22`, `E33`.
    pub fn weight(&self) -> [f64; 3] {
        [self.m11, self.mid[0] + self.mid[1] - self.m11, self.mid[2]]
    }
}

impl fmt::Display for GzVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}; [{}, {}, {}]; m11={})_{}",
            self.top,
            self.mid[0],
            self.mid[1],
            self.mid[2],
            self.m11,
            self.k.index()
        )
    }
}

/// The shifted l-labels used in every matrix element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LValues {
    pub l11: f64,
    pub l12: f64,
    pub l22: f64,
    pub l31: f64,
    pub l13: f64,
    pub l23: f64,
    pub l33: f64,
    pub l: f64,
}

/// `l_ij = m_ij - (i - 2 delta_{i3})`, plus `l = (m13 - m23) / 2`.
pub fn lvalues(v: &GzVector) -> LValues {
    let top = v.top();
    let mid = v.mid();
    LValues {
        l11: v.m11() - 1.0,
        l12: mid[0] - 1.0,
        l22: mid[1] - 2.0,
        l31: v.m31() - 1.0,
        l13: top.m13 - 1.0,
        l23: top.m23 - 2.0,
        l33: top.m33 - 1.0,
        l: top.l(),
    }
}

/// Patterns of `V_k`, `m11` descending. Empty when `V_k` collapses.
pub fn enumerate_basis(hw: &HighestWeight, k: Submodule) -> Vec<GzVector> {
    (0..submodule_width(hw, k)).map(|depth| GzVector::at_depth(*hw, k, depth)).collect()
}

/// All reduced basis vectors, submodule-major then `m11` descending.
pub fn full_module_basis(hw: &HighestWeight) -> Vec<GzVector> {
    Submodule::ALL.iter().flat_map(|&k| enumerate_basis(hw, k)).collect()
}

/// Local highest weight vector `(M)_k`, the pattern with `m11 = m12`.
pub fn highest_weight_vector(hw: &HighestWeight, k: Submodule) -> Result<GzVector> {
    enumerate_basis(hw, k).into_iter().next().ok_or(KacError::EmptyModule(k.index()))
}

/// Ordered reduced basis with constant-time position lookup.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleBasis {
    hw: HighestWeight,
    vectors: Vec<GzVector>,
    offsets: [usize; 4],
}

impl ModuleBasis {
    pub fn new(hw: HighestWeight) -> Self {
        let mut offsets = [0; 4];
        let mut acc = 0;
        for k in Submodule::ALL {
            offsets[k.index()] = acc;
            acc += submodule_width(&hw, k);
        }
        Self { hw, vectors: full_module_basis(&hw), offsets }
    }

    pub fn highest_weight(&self) -> &HighestWeight {
        &self.hw
    }

    pub fn vectors(&self) -> &[GzVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Position of `v` in the ordered basis.
    pub fn position(&self, v: &GzVector) -> Result<usize> {
        if v.top() != &self.hw {
            return Err(KacError::BasisMismatch(format!("{v} does not belong to W({})", self.hw)));
        }
        Ok(self.offsets[v.k().index()] + v.depth())
    }

    /// Positions of all vectors in `V_k`.
    pub fn block(&self, k: Submodule) -> std::ops::Range<usize> {
        let start = self.offsets[k.index()];
        start..start + submodule_width(&self.hw, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(a: f64, b: f64, c: f64) -> HighestWeight {
        HighestWeight::new(a, b, c).unwrap()
    }

    #[test]
    fn weight_validation() {
        assert!(HighestWeight::new(0.0, 1.0, 0.0).is_err());
        assert!(HighestWeight::new(1.5, 0.0, 0.0).is_err());
        assert!(HighestWeight::new(1.5, 0.5, -3.25).is_ok());
        assert!(HighestWeight::new(f64::INFINITY, 0.0, 0.0).is_err());
    }

    #[test]
    fn shift_examples() {
        let w = hw(2.0, 1.0, 0.0);
        assert_eq!(signature_shift(&w, 0).unwrap(), [2.0, 1.0, 0.0]);
        assert_eq!(signature_shift(&w, 1).unwrap(), [2.0, 0.0, 1.0]);
        assert_eq!(signature_shift(&w, 2).unwrap(), [1.0, 1.0, 1.0]);
        assert_eq!(signature_shift(&w, 3).unwrap(), [1.0, 0.0, 2.0]);
        assert_eq!(signature_shift(&w, 4), Err(KacError::Range(4)));
        assert_eq!(signature_shift(&w, -1), Err(KacError::Range(-1)));
    }

    #[test]
    fn enumerate_examples() {
        let w = hw(1.0, 0.0, 0.0);
        let v0 = enumerate_basis(&w, Submodule::V0);
        assert_eq!(v0.iter().map(GzVector::m11).collect::<Vec<_>>(), vec![1.0, 0.0]);
        let v2 = enumerate_basis(&w, Submodule::V2);
        assert_eq!(v2.len(), 1);
        assert_eq!(v2[0].mid(), [0.0, 0.0, 1.0]);
        assert_eq!(v2[0].m11(), 0.0);

        let flat = hw(0.0, 0.0, 5.0);
        assert!(enumerate_basis(&flat, Submodule::V2).is_empty());
        let v3 = enumerate_basis(&flat, Submodule::V3);
        assert_eq!(v3.len(), 1);
        assert_eq!(v3[0].mid(), [-1.0, -1.0, 7.0]);
    }

    #[test]
    fn full_basis_sizes() {
        assert_eq!(full_module_basis(&hw(0.0, 0.0, 0.0)).len(), 4);
        assert_eq!(full_module_basis(&hw(1.0, 0.0, 0.0)).len(), 8);
        assert_eq!(full_module_basis(&hw(3.0, 1.0, -0.5)).len(), 12);
    }

    #[test]
    fn highest_weight_vectors() {
        let w = hw(1.0, 0.0, 0.0);
        assert_eq!(highest_weight_vector(&w, Submodule::V0).unwrap().m11(), 1.0);
        let m1 = highest_weight_vector(&w, Submodule::V1).unwrap();
        assert_eq!((m1.mid(), m1.m11()), ([1.0, -1.0, 1.0], 1.0));
        let m3 = highest_weight_vector(&w, Submodule::V3).unwrap();
        assert_eq!((m3.mid(), m3.m11()), ([0.0, -1.0, 2.0], 0.0));
        let flat = hw(2.0, 2.0, 0.0);
        assert_eq!(highest_weight_vector(&flat, Submodule::V2), Err(KacError::EmptyModule(2)));
    }

    #[test]
    fn lvalue_examples() {
        let w = hw(1.0, 0.0, 0.0);
        let m = highest_weight_vector(&w, Submodule::V0).unwrap();
        let l = lvalues(&m);
        assert_eq!(l.l11, 0.0);
        assert_eq!((l.l13, l.l23, l.l33), (0.0, -2.0, -1.0));
        assert_eq!(l.l12, 0.0);
        assert_eq!(l.l22, -2.0);
        assert_eq!(l.l31, -1.0);
        let two = highest_weight_vector(&hw(2.0, 0.0, 0.5), Submodule::V0).unwrap();
        assert_eq!(lvalues(&two).l, 1.0);
    }

    #[test]
    fn pattern_validation_and_shifts() {
        let w = hw(2.0, 0.0, 0.0);
        assert!(GzVector::new(w, Submodule::V0, 3.0).is_err());
        assert!(GzVector::new(w, Submodule::V0, 0.5).is_err());
        let v = GzVector::new(w, Submodule::V0, 2.0).unwrap();
        assert!(v.shift_m11(1).is_none());
        assert_eq!(v.shift_m11(-2).unwrap().m11(), 0.0);
        assert!(v.shift_m11(-3).is_none());
        // V_3 runs from m11 = 1 down to -1, V_0 only down to 0.
        let low = GzVector::new(w, Submodule::V3, -1.0).unwrap();
        assert!(low.with_submodule(Submodule::V0).is_none());
        assert!(low.with_submodule(Submodule::V1).is_some());
    }

    #[test]
    fn basis_positions_round_trip() {
        let w = hw(3.0, 1.0, 0.37);
        let b = ModuleBasis::new(w);
        for (i, v) in b.vectors().iter().enumerate() {
            assert_eq!(b.position(v).unwrap(), i);
            // Betweenness and m32 = m31 hold by construction.
            assert!(v.m11() <= v.mid()[0] && v.m11() >= v.mid()[1]);
            assert_eq!(v.m31(), v.mid()[2]);
        }
        assert_eq!(b.block(Submodule::V2), 7..9);
        let other = ModuleBasis::new(hw(1.0, 0.0, 0.0));
        assert!(other.position(&b.vectors()[0]).is_err());
    }
}
