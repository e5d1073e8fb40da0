//! The induced module `W([m]) = V_0 + V_1 + V_2 + V_3` in the reduced basis.
//!
//! Matrices are built directly from the closed-form action of the even
//! generators and of the odd Chevalley generators `E23`, `E32`. The induced
//! basis `|theta1, theta2; (m)> = E31^theta1 E32^theta2 (m)` and the two
//! basis-change maps between it and the reduced basis are kept as an
//! independent cross-check.
//!
//! Reduced vectors in the induced basis, with `(m)` the `V_0` pattern of the
//! same `m11`:
//!
//! ```text
//! (m)_0 = |0,0;(m)>
//! (m)_1 = a1 { -([l13-l11]/[2l+1])^1/2 |1,0;(m)^+11>
//!              + q^(l11-l13) ([l11-l23]/[2l+1])^1/2 |0,1;(m)> }
//! (m)_2 = a2 { ([l11-l23]/[2l])^1/2 |1,0;(m)^+11>
//!              + q^(l11-l23) ([l13-l11]/[2l])^1/2 |0,1;(m)> }
//! (m)_3 = a3 |1,1;(m)^+11>
//! ```
//!
//! The `q^(l11-l13)` factor in `(m)_1` and the `^+11` shift in `(m)_3` are
//! what make this map the inverse of [`induced_to_reduced`], whose
//! coefficients agree with the generator action.

use std::collections::BTreeMap;

use crate::error::{KacError, Result};
use crate::evenaction::{act_even, cartan_eigenvalue, Cartan, Generator};
use crate::gzbasis::{lvalues, GzVector, HighestWeight, LValues, ModuleBasis, Submodule};
use crate::lincomb::LinComb;
use crate::matrix::{Matrix, Scalar};
use crate::qarith::Deformation;

/// Free normalization constants `a1, a2, a3` of `V_1, V_2, V_3` (`a0 = 1`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Normalization {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl Default for Normalization {
    fn default() -> Self {
        Self { a1: 1.0, a2: 1.0, a3: 1.0 }
    }
}

impl Normalization {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        for a in [a1, a2, a3] {
            if !a.is_finite() || a == 0.0 {
                return Err(KacError::InvalidContext(format!("normalization constant {a} must be finite and nonzero")));
            }
        }
        Ok(Self { a1, a2, a3 })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a1, self.a2, self.a3]
    }
}

/// Induced basis vector `|theta1, theta2; (m)>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InducedVector {
    pub theta1: bool,
    pub theta2: bool,
    pattern: GzVector,
}

impl InducedVector {
    pub fn new(theta1: bool, theta2: bool, pattern: GzVector) -> Result<Self> {
        if pattern.k() != Submodule::V0 {
            return Err(KacError::InvalidPattern(format!("{pattern} is not a V0 pattern")));
        }
        Ok(Self { theta1, theta2, pattern })
    }

    pub fn pattern(&self) -> &GzVector {
        &self.pattern
    }

    fn sector(&self) -> usize {
        2 * usize::from(self.theta1) + usize::from(self.theta2)
    }
}

/// Induced basis, ordered by `(theta1, theta2)` in `00, 01, 10, 11` order and
/// then by descending `m11`.
pub fn induced_basis(hw: &HighestWeight) -> Vec<InducedVector> {
    let v0 = crate::gzbasis::enumerate_basis(hw, Submodule::V0);
    [(false, false), (false, true), (true, false), (true, true)]
        .into_iter()
        .flat_map(|(t1, t2)| v0.iter().map(move |p| InducedVector { theta1: t1, theta2: t2, pattern: *p }))
        .collect()
}

fn induced_position(w: &InducedVector) -> usize {
    w.sector() * w.pattern.top().width() + w.pattern.depth()
}

/// `sqrt([x1][x2]...)` over non-negative products.
fn root<D: Deformation + ?Sized>(ctx: &D, args: &[f64]) -> Result<f64> {
    let mut product = 1.0;
    for &x in args {
        product *= ctx.bracket(x);
    }
    if product < 0.0 {
        return Err(KacError::Domain { arg: args[0], value: product });
    }
    Ok(product.sqrt())
}

/// `[x]`, refusing the vanishing denominators of collapsed submodules.
fn denominator<D: Deformation + ?Sized>(ctx: &D, x: f64) -> Result<f64> {
    let b = ctx.bracket(x);
    if b == 0.0 {
        return Err(KacError::Degenerate(format!("vanishing denominator [{x}]")));
    }
    Ok(b)
}

/// Adds a term whose target may lie outside the pattern range; that is only
/// allowed when the coefficient vanishes.
fn emit<V: PartialEq>(out: &mut LinComb<V>, target: Option<V>, coeff: f64, drop: f64) -> Result<()> {
    match target {
        Some(t) => out.push(t, coeff),
        None if coeff.abs() <= drop => {}
        None => {
            return Err(KacError::Degenerate(format!(
                "coefficient {coeff} points outside the pattern range"
            )))
        }
    }
    Ok(())
}

/// `V_0` pattern with `m11` shifted by `delta`; the source may lie outside `V_0`.
fn v0_pattern(v: &GzVector, delta: i64) -> Option<GzVector> {
    GzVector::new(*v.top(), Submodule::V0, v.m11() + delta as f64).ok()
}

fn induced(theta1: bool, theta2: bool, pattern: Option<GzVector>) -> Option<InducedVector> {
    pattern.map(|p| InducedVector { theta1, theta2, pattern: p })
}

/// Expansion of a reduced basis vector in the induced basis.
pub fn reduced_to_induced<D: Deformation + ?Sized>(
    ctx: &D,
    norm: &Normalization,
    v: &GzVector,
) -> Result<LinComb<InducedVector>> {
    let drop = ctx.tol() / 100.0;
    let LValues { l11, l13, l23, l, .. } = lvalues(v);
    let mut out = LinComb::zero(drop);
    let same = v0_pattern(v, 0);
    let up = v0_pattern(v, 1);
    match v.k() {
        Submodule::V0 => emit(&mut out, induced(false, false, same), 1.0, drop)?,
        Submodule::V1 => {
            let d = denominator(ctx, 2.0 * l + 1.0)?;
            let c10 = -norm.a1 * root(ctx, &[l13 - l11])? / d.sqrt();
            let c01 = norm.a1 * ctx.power(l11 - l13) * root(ctx, &[l11 - l23])? / d.sqrt();
            emit(&mut out, induced(true, false, up), c10, drop)?;
            emit(&mut out, induced(false, true, same), c01, drop)?;
        }
        Submodule::V2 => {
            let d = denominator(ctx, 2.0 * l)?;
            let c10 = norm.a2 * root(ctx, &[l11 - l23])? / d.sqrt();
            let c01 = norm.a2 * ctx.power(l11 - l23) * root(ctx, &[l13 - l11])? / d.sqrt();
            emit(&mut out, induced(true, false, up), c10, drop)?;
            emit(&mut out, induced(false, true, same), c01, drop)?;
        }
        Submodule::V3 => emit(&mut out, induced(true, true, up), norm.a3, drop)?,
    }
    Ok(out)
}

/// Expansion of an induced basis vector in the reduced basis.
pub fn induced_to_reduced<D: Deformation + ?Sized>(
    ctx: &D,
    norm: &Normalization,
    w: &InducedVector,
) -> Result<LinComb<GzVector>> {
    let drop = ctx.tol() / 100.0;
    let m = w.pattern();
    let LValues { l11, l13, l23, l, .. } = lvalues(m);
    let mut out = LinComb::zero(drop);
    let lowered = |k: Submodule| GzVector::new(*m.top(), k, m.m11() - 1.0).ok();
    let same = |k: Submodule| m.with_submodule(k);
    match (w.theta1, w.theta2) {
        (false, false) => out.push(*m, 1.0),
        (true, false) => {
            let d = denominator(ctx, 2.0 * l + 1.0)?;
            let c1 = -ctx.power(l11 - l23 - 1.0) * root(ctx, &[l13 - l11 + 1.0])? / (norm.a1 * d.sqrt());
            emit(&mut out, lowered(Submodule::V1), c1, drop)?;
            let c2 = ctx.power(l11 - l13 - 1.0) * root(ctx, &[l11 - l23 - 1.0, 2.0 * l])? / (norm.a2 * d);
            emit(&mut out, lowered(Submodule::V2), c2, drop)?;
        }
        (false, true) => {
            let d = denominator(ctx, 2.0 * l + 1.0)?;
            let c1 = root(ctx, &[l11 - l23])? / (norm.a1 * d.sqrt());
            emit(&mut out, same(Submodule::V1), c1, drop)?;
            let c2 = root(ctx, &[l13 - l11, 2.0 * l])? / (norm.a2 * d);
            emit(&mut out, same(Submodule::V2), c2, drop)?;
        }
        (true, true) => emit(&mut out, lowered(Submodule::V3), 1.0 / norm.a3, drop)?,
    }
    Ok(out)
}

/// Matrix of [`reduced_to_induced`]: column `c` expands reduced vector `c`
/// in the induced basis.
pub fn reduced_to_induced_matrix<D: Deformation + ?Sized>(
    ctx: &D,
    norm: &Normalization,
    hw: &HighestWeight,
) -> Result<Matrix> {
    let basis = ModuleBasis::new(*hw);
    let mut m = Matrix::zeros(hw.module_dim(), basis.len());
    for (c, v) in basis.vectors().iter().enumerate() {
        for (w, coeff) in reduced_to_induced(ctx, norm, v)?.terms() {
            m.add_at(induced_position(w), c, *coeff);
        }
    }
    Ok(m)
}

/// Matrix of [`induced_to_reduced`]: column `c` expands induced vector `c`
/// in the reduced basis.
pub fn induced_to_reduced_matrix<D: Deformation + ?Sized>(
    ctx: &D,
    norm: &Normalization,
    hw: &HighestWeight,
) -> Result<Matrix> {
    let basis = ModuleBasis::new(*hw);
    let induced = induced_basis(hw);
    let mut m = Matrix::zeros(basis.len(), induced.len());
    for (c, w) in induced.iter().enumerate() {
        for (v, coeff) in induced_to_reduced(ctx, norm, w)?.terms() {
            m.add_at(basis.position(v)?, c, *coeff);
        }
    }
    Ok(m)
}

/// Action of `E23` or `E32` on a reduced pattern.
///
/// Targets keep `m11` and the first row; only the submodule changes.
pub fn act_odd<D: Deformation + ?Sized>(
    ctx: &D,
    norm: &Normalization,
    g: Generator,
    v: &GzVector,
) -> Result<LinComb<GzVector>> {
    let drop = ctx.tol() / 100.0;
    let LValues { l11, l13, l23, l33, l, .. } = lvalues(v);
    let q = ctx.power(1.0);
    let Normalization { a1, a2, a3 } = *norm;
    let to = |k: Submodule| v.with_submodule(k);
    let mut out = LinComb::zero(drop);
    match (g, v.k()) {
        (Generator::E23, Submodule::V0) | (Generator::E32, Submodule::V3) => {}
        (Generator::E23, Submodule::V1) => {
            let d = denominator(ctx, 2.0 * l + 1.0)?;
            let c = a1 * root(ctx, &[l11 - l23])? / d.sqrt() * ctx.bracket(l23 + l33 + 3.0);
            emit(&mut out, to(Submodule::V0), c, drop)?;
        }
        (Generator::E23, Submodule::V2) => {
            let d = denominator(ctx, 2.0 * l)?;
            let c = a2 * root(ctx, &[l13 - l11])? / d.sqrt() * ctx.bracket(l13 + l33 + 3.0);
            emit(&mut out, to(Submodule::V0), c, drop)?;
        }
        (Generator::E23, Submodule::V3) => {
            let d = denominator(ctx, 2.0 * l + 1.0)?;
            let c1 = a3 / (a1 * q) * root(ctx, &[l13 - l11])? / d.sqrt() * ctx.bracket(l13 + l33 + 3.0);
            emit(&mut out, to(Submodule::V1), c1, drop)?;
            let c2 = -a3 / (a2 * q) * root(ctx, &[l11 - l23, 2.0 * l])? * ctx.bracket(l23 + l33 + 3.0) / d;
            emit(&mut out, to(Submodule::V2), c2, drop)?;
        }
        (Generator::E32, Submodule::V0) => {
            let d = denominator(ctx, 2.0 * l + 1.0)?;
            let c1 = root(ctx, &[l11 - l23])? / (a1 * d.sqrt());
            emit(&mut out, to(Submodule::V1), c1, drop)?;
            let c2 = root(ctx, &[l13 - l11, 2.0 * l])? / (a2 * d);
            emit(&mut out, to(Submodule::V2), c2, drop)?;
        }
        (Generator::E32, Submodule::V1) => {
            let d = denominator(ctx, 2.0 * l + 1.0)?;
            let c = a1 / a3 * q * root(ctx, &[l13 - l11])? / d.sqrt();
            emit(&mut out, to(Submodule::V3), c, drop)?;
        }
        (Generator::E32, Submodule::V2) => {
            let d = denominator(ctx, 2.0 * l)?;
            let c = -a2 / a3 * q * root(ctx, &[l11 - l23])? / d.sqrt();
            emit(&mut out, to(Submodule::V3), c, drop)?;
        }
        (other, _) => return Err(KacError::UnsupportedGenerator(other.to_string())),
    }
    Ok(out)
}

/// Label of one basis vector of a [`MatrixSet`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BasisLabel {
    /// Reduced pattern of an induced module.
    Pattern(GzVector),
    /// Product vector `u_i (x) v_j` of a tensor product.
    Product(usize, usize),
    /// Standard basis vector `e_i` (0-based).
    Standard(usize),
}

/// One generator represented on an ordered basis. Entry `(r, c)` is the
/// coefficient of basis vector `r` in the image of basis vector `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct RepMatrix<T = f64> {
    pub generator: Generator,
    pub entries: Matrix<T>,
}

impl<T: Scalar> RepMatrix<T> {
    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn is_odd(&self) -> bool {
        self.generator.is_odd()
    }
}

/// A full set of generator matrices over a common graded basis.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSet<T = f64> {
    basis: Vec<BasisLabel>,
    odd: Vec<bool>,
    matrices: BTreeMap<Generator, Matrix<T>>,
}

impl<T: Scalar> MatrixSet<T> {
    pub fn new(basis: Vec<BasisLabel>, odd: Vec<bool>) -> Result<Self> {
        if basis.len() != odd.len() {
            return Err(KacError::BasisMismatch(format!(
                "{} basis labels but {} parities",
                basis.len(),
                odd.len()
            )));
        }
        Ok(Self { basis, odd, matrices: BTreeMap::new() })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisLabel] {
        &self.basis
    }

    /// Parity of each basis vector (`true` = odd).
    pub fn parities(&self) -> &[bool] {
        &self.odd
    }

    pub fn insert(&mut self, generator: Generator, entries: Matrix<T>) -> Result<()> {
        if entries.rows() != self.dim() || entries.cols() != self.dim() {
            return Err(KacError::BasisMismatch(format!(
                "{generator} is {}x{}, basis has {} vectors",
                entries.rows(),
                entries.cols(),
                self.dim()
            )));
        }
        self.matrices.insert(generator, entries);
        Ok(())
    }

    pub fn get(&self, g: Generator) -> Result<&Matrix<T>> {
        self.matrices.get(&g).ok_or_else(|| KacError::BasisMismatch(format!("generator {g} missing")))
    }

    pub fn rep(&self, g: Generator) -> Result<RepMatrix<T>> {
        Ok(RepMatrix { generator: g, entries: self.get(g)?.clone() })
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.matrices.contains_key(&g)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Generator, &Matrix<T>)> {
        self.matrices.iter().map(|(g, m)| (*g, m))
    }

    pub fn generators(&self) -> Vec<Generator> {
        self.matrices.keys().copied().collect()
    }

    /// Restriction to the basis vectors at positions `keep` (the factor
    /// module when the complement is invariant).
    pub fn restrict(&self, keep: &[usize]) -> Self {
        Self {
            basis: keep.iter().map(|&i| self.basis[i]).collect(),
            odd: keep.iter().map(|&i| self.odd[i]).collect(),
            matrices: self.matrices.iter().map(|(g, m)| (*g, m.submatrix(keep))).collect(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MatrixSet<U> {
        MatrixSet {
            basis: self.basis.clone(),
            odd: self.odd.clone(),
            matrices: self.matrices.iter().map(|(g, m)| (*g, m.map(&f))).collect(),
        }
    }

    /// Entries that connect basis vectors of the wrong relative parity.
    pub fn parity_violations(&self) -> Vec<(Generator, usize, usize)> {
        let mut bad = Vec::new();
        for (g, m) in &self.matrices {
            for r in 0..self.dim() {
                for c in 0..self.dim() {
                    if (self.odd[r] != self.odd[c]) != g.is_odd() && !m.get(r, c).is_zero() {
                        bad.push((*g, r, c));
                    }
                }
            }
        }
        bad
    }
}

/// `E13 = E12 E23 - q^-1 E23 E12` or `E31 = -(E21 E32 - q^-1 E32 E21)`.
pub fn composite_odd<D: Deformation + ?Sized>(ctx: &D, g: Generator, set: &MatrixSet) -> Result<RepMatrix> {
    let q_inv = ctx.power(-1.0);
    let entries = match g {
        Generator::E13 => Matrix::deformed_commutator(set.get(Generator::E12)?, set.get(Generator::E23)?, &q_inv),
        Generator::E31 => {
            Matrix::deformed_commutator(set.get(Generator::E21)?, set.get(Generator::E32)?, &q_inv).scale(&-1.0)
        }
        other => return Err(KacError::UnsupportedGenerator(other.to_string())),
    };
    Ok(RepMatrix { generator: g, entries })
}

/// Adds `E13` and `E31` computed from the Chevalley generators.
pub fn add_composites<D: Deformation + ?Sized>(ctx: &D, set: &mut MatrixSet) -> Result<()> {
    for g in [Generator::E13, Generator::E31] {
        let rep = composite_odd(ctx, g, set)?;
        set.insert(g, rep.entries)?;
    }
    Ok(())
}

/// Every generator matrix of `W([m])` over the reduced basis.
pub fn build_module<D: Deformation + ?Sized>(
    ctx: &D,
    norm: &Normalization,
    hw: &HighestWeight,
) -> Result<MatrixSet> {
    let basis = ModuleBasis::new(*hw);
    let n = basis.len();
    let labels = basis.vectors().iter().map(|v| BasisLabel::Pattern(*v)).collect();
    let odd = basis.vectors().iter().map(|v| v.k().is_odd()).collect();
    let mut set = MatrixSet::new(labels, odd)?;

    let chevalley = [
        Generator::E11,
        Generator::E22,
        Generator::E33,
        Generator::E12,
        Generator::E21,
        Generator::E23,
        Generator::E32,
    ];
    for g in chevalley {
        let mut m = Matrix::zeros(n, n);
        for (c, v) in basis.vectors().iter().enumerate() {
            let image = if g.is_odd() { act_odd(ctx, norm, g, v)? } else { act_even(ctx, g, v)? };
            for (w, coeff) in image.terms() {
                m.add_at(basis.position(w)?, c, *coeff);
            }
        }
        set.insert(g, m)?;
    }
    for (g, which) in [(Generator::H1, Cartan::H1), (Generator::H2, Cartan::H2)] {
        let diag: Vec<f64> = basis.vectors().iter().map(|v| cartan_eigenvalue(which, v)).collect();
        set.insert(g, Matrix::diagonal(&diag))?;
    }
    add_composites(ctx, &mut set)?;
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gzbasis::highest_weight_vector;
    use crate::qarith::QContext;

    fn hw(a: f64, b: f64, c: f64) -> HighestWeight {
        HighestWeight::new(a, b, c).unwrap()
    }

    #[test]
    fn reduced_to_induced_examples() {
        let ctx = QContext::new(2.0).unwrap();
        let norm = Normalization::default();
        let w = hw(2.0, 0.0, 0.0);

        let m = GzVector::new(w, Submodule::V0, 1.0).unwrap();
        let img = reduced_to_induced(&ctx, &norm, &m).unwrap();
        assert_eq!(img.terms(), &[(InducedVector::new(false, false, m).unwrap(), 1.0)]);

        let m1 = highest_weight_vector(&w, Submodule::V1).unwrap();
        let img = reduced_to_induced(&ctx, &norm, &m1).unwrap();
        let top = highest_weight_vector(&w, Submodule::V0).unwrap();
        assert_eq!(img.len(), 1);
        assert!((img.coefficient(&InducedVector::new(false, true, top).unwrap()) - 1.0).abs() < 1e-14);

        // (M)_2 = a2 { |1,0;(M)> + q^2l [2l]^-1/2 |0,1;(M)^-11> } with 2l = 2.
        let m2 = highest_weight_vector(&w, Submodule::V2).unwrap();
        let img = reduced_to_induced(&ctx, &norm, &m2).unwrap();
        let lowered = top.shift_m11(-1).unwrap();
        let expect = 4.0 / ctx.bracket(2.0).sqrt();
        assert!((img.coefficient(&InducedVector::new(true, false, top).unwrap()) - 1.0).abs() < 1e-14);
        assert!((img.coefficient(&InducedVector::new(false, true, lowered).unwrap()) - expect).abs() < 1e-14);
    }

    #[test]
    fn induced_to_reduced_examples() {
        let ctx = QContext::new(1.7).unwrap();
        let norm = Normalization::new(1.0, 1.0, 0.5).unwrap();
        let w = hw(2.0, 0.0, 0.0);
        let m = GzVector::new(w, Submodule::V0, 1.0).unwrap();
        let img = induced_to_reduced(&ctx, &norm, &InducedVector::new(false, false, m).unwrap()).unwrap();
        assert_eq!(img.terms(), &[(m, 1.0)]);
        let img = induced_to_reduced(&ctx, &norm, &InducedVector::new(true, true, m).unwrap()).unwrap();
        let target = GzVector::new(w, Submodule::V3, 0.0).unwrap();
        assert_eq!(img.terms(), &[(target, 2.0)]);
    }

    #[test]
    fn induced_vector_requires_v0() {
        let m1 = highest_weight_vector(&hw(1.0, 0.0, 0.0), Submodule::V1).unwrap();
        assert!(InducedVector::new(false, false, m1).is_err());
    }

    #[test]
    fn odd_examples() {
        let ctx = QContext::new(1.7).unwrap();
        let norm = Normalization::default();
        let w = hw(2.0, 0.0, 0.0);
        for v in crate::gzbasis::enumerate_basis(&w, Submodule::V0) {
            assert!(act_odd(&ctx, &norm, Generator::E23, &v).unwrap().is_zero());
        }
        for v in crate::gzbasis::enumerate_basis(&w, Submodule::V3) {
            assert!(act_odd(&ctx, &norm, Generator::E32, &v).unwrap().is_zero());
        }
        let top = highest_weight_vector(&w, Submodule::V0).unwrap();
        let img = act_odd(&ctx, &norm, Generator::E32, &top).unwrap();
        let m1 = highest_weight_vector(&w, Submodule::V1).unwrap();
        assert_eq!(img.len(), 1);
        assert!((img.coefficient(&m1) - 1.0).abs() < 1e-14);
        assert!(act_odd(&ctx, &norm, Generator::E12, &top).is_err());
    }

    #[test]
    fn module_dimensions() {
        let ctx = QContext::new(1.7).unwrap();
        let norm = Normalization::default();
        assert_eq!(build_module(&ctx, &norm, &hw(1.0, 0.0, 1.0)).unwrap().dim(), 8);
        assert_eq!(build_module(&ctx, &norm, &hw(0.0, 0.0, 0.5)).unwrap().dim(), 4);
        assert_eq!(build_module(&ctx, &norm, &hw(2.0, 0.0, 0.0)).unwrap().dim(), 12);
    }

    #[test]
    fn e23_block_pattern() {
        let ctx = QContext::new(1.7).unwrap();
        let w = hw(1.0, 0.0, 1.0);
        let set = build_module(&ctx, &Normalization::default(), &w).unwrap();
        let basis = ModuleBasis::new(w);
        let e23 = set.get(Generator::E23).unwrap();
        let block_of = |i: usize| Submodule::ALL.into_iter().find(|&k| basis.block(k).contains(&i)).unwrap();
        for r in 0..set.dim() {
            for c in 0..set.dim() {
                if e23.get(r, c).abs() > 0.0 {
                    let allowed = matches!(
                        (block_of(c), block_of(r)),
                        (Submodule::V1, Submodule::V0)
                            | (Submodule::V2, Submodule::V0)
                            | (Submodule::V3, Submodule::V1)
                            | (Submodule::V3, Submodule::V2)
                    );
                    assert!(allowed, "E23 entry ({r}, {c})");
                }
            }
        }
        assert!(set.parity_violations().is_empty());
    }

    #[test]
    fn composites_square_to_zero() {
        let ctx = QContext::new(1.7).unwrap();
        let set = build_module(&ctx, &Normalization::default(), &hw(3.0, 1.0, 0.37)).unwrap();
        for g in [Generator::E13, Generator::E31] {
            let m = set.get(g).unwrap();
            assert!((m * m).max_abs() < 1e-10 * m.max_abs().max(1.0));
        }
        assert!(composite_odd(&ctx, Generator::E12, &set).is_err());
    }

    #[test]
    fn matrix_set_rejects_wrong_shapes() {
        let mut set = MatrixSet::<f64>::new(vec![BasisLabel::Standard(0)], vec![false]).unwrap();
        assert!(set.insert(Generator::E11, Matrix::zeros(2, 2)).is_err());
        assert!(set.get(Generator::E11).is_err());
        assert!(MatrixSet::<f64>::new(vec![BasisLabel::Standard(0)], vec![]).is_err());
    }
}
