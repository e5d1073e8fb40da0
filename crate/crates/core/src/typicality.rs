//! Typical / nontypical classification, maximal invariant subspaces and the
//! irreducible factor modules of nontypical induced modules.

use std::fmt;

use num::{BigRational, ToPrimitive, Zero};

use crate::error::{KacError, Result};
use crate::evenaction::Generator;
use crate::gzbasis::{lvalues, GzVector, HighestWeight, LValues, ModuleBasis, Submodule};
use crate::induced::{build_module, MatrixSet, Normalization};
use crate::lincomb::LinComb;
use crate::matrix::Matrix;
use crate::qarith::Deformation;

/// Relative slack below which an atypicality label counts as zero after
/// the exact sum has been formed.
const LABEL_ZERO_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Typical,
    Class1,
    Class2,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Typical => "typical",
            Kind::Class1 => "class1",
            Kind::Class2 => "class2",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Kind {
    type Err = KacError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "typical" => Ok(Kind::Typical),
            "class1" => Ok(Kind::Class1),
            "class2" => Ok(Kind::Class2),
            other => Err(KacError::Format(format!("unknown classification {other:?}"))),
        }
    }
}

/// Kind plus the two atypicality labels `c1 = l13 + l33 + 3 = m13 + m33 + 1`
/// and `c2 = l23 + l33 + 3 = m23 + m33`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Classification {
    pub kind: Kind,
    pub c1: f64,
    pub c2: f64,
}

impl Classification {
    pub fn is_typical(&self) -> bool {
        self.kind == Kind::Typical
    }
}

/// Sum of the given reals, evaluated without rounding; `true` if it vanishes.
fn vanishes(terms: &[f64]) -> (bool, f64) {
    let exact = terms
        .iter()
        .map(|&t| BigRational::from_float(t).expect("finite labels"))
        .fold(BigRational::zero(), |acc, t| acc + t);
    let value = exact.to_f64().unwrap_or(f64::NAN);
    let scale = terms.iter().fold(1f64, |m, t| m.max(t.abs()));
    (exact.is_zero() || value.abs() <= LABEL_ZERO_TOL * scale, value)
}

pub fn classify(hw: &HighestWeight) -> Classification {
    let (c1_zero, c1) = vanishes(&[hw.m13, hw.m33, 1.0]);
    let (c2_zero, c2) = vanishes(&[hw.m23, hw.m33]);
    // Both vanishing would need m13 - m23 = -1.
    let kind = match (c1_zero, c2_zero) {
        (true, false) => Kind::Class1,
        (false, true) => Kind::Class2,
        _ => Kind::Typical,
    };
    // Normalise -0.0 for display.
    let clean = |c: f64, zero: bool| if zero { 0.0 } else { c + 0.0 };
    Classification { kind, c1: clean(c1, c1_zero), c2: clean(c2, c2_zero) }
}

/// Dimension of the irreducible module with highest weight `hw`.
pub fn irreducible_dim(hw: &HighestWeight) -> usize {
    let d = hw.width();
    match classify(hw).kind {
        Kind::Typical => 4 * d,
        Kind::Class1 => 2 * d + 1,
        Kind::Class2 => 2 * d - 1,
    }
}

fn invariant_blocks(kind: Kind) -> Result<[Submodule; 2]> {
    match kind {
        Kind::Typical => Err(KacError::NotNontypical),
        Kind::Class1 => Ok([Submodule::V2, Submodule::V3]),
        Kind::Class2 => Ok([Submodule::V1, Submodule::V3]),
    }
}

/// Positions (in the reduced basis) spanning the maximal invariant subspace.
pub fn invariant_positions(hw: &HighestWeight) -> Result<Vec<usize>> {
    let blocks = invariant_blocks(classify(hw).kind)?;
    let basis = ModuleBasis::new(*hw);
    Ok(Submodule::ALL
        .into_iter()
        .filter(|k| blocks.contains(k))
        .flat_map(|k| basis.block(k))
        .collect())
}

/// Positions of the complement of the invariant subspace, which index the
/// factor module.
pub fn factor_positions(hw: &HighestWeight) -> Result<Vec<usize>> {
    let invariant = invariant_positions(hw)?;
    Ok((0..hw.module_dim()).filter(|i| !invariant.contains(i)).collect())
}

/// Basis of the maximal invariant subspace, checked against `set`: every
/// generator must map its span into itself and it must miss `V_0`.
pub fn invariant_subspace<D: Deformation + ?Sized>(
    ctx: &D,
    hw: &HighestWeight,
    set: &MatrixSet,
) -> Result<Vec<GzVector>> {
    let positions = invariant_positions(hw)?;
    if set.dim() != hw.module_dim() {
        return Err(KacError::Dimension { expected: hw.module_dim(), found: set.dim() });
    }
    let basis = ModuleBasis::new(*hw);
    if positions.iter().any(|&p| basis.block(Submodule::V0).contains(&p)) {
        return Err(KacError::NotInvariant("V0 intersects the subspace".into()));
    }
    for (g, m) in set.iter() {
        let floor = ctx.tol() * m.max_abs().max(1.0);
        for &c in &positions {
            for r in (0..set.dim()).filter(|r| !positions.contains(r)) {
                if m.get(r, c).abs() > floor {
                    return Err(KacError::NotInvariant(g.to_string()));
                }
            }
        }
    }
    Ok(positions.iter().map(|&p| basis.vectors()[p]).collect())
}

/// Factor module `W / I` of a nontypical module, on the complement basis.
pub fn factor_module<D: Deformation + ?Sized>(
    ctx: &D,
    norm: &Normalization,
    hw: &HighestWeight,
) -> Result<MatrixSet> {
    let full = build_module(ctx, norm, hw)?;
    invariant_subspace(ctx, hw, &full)?;
    Ok(full.restrict(&factor_positions(hw)?))
}

/// Odd action on the factor module written with the atypicality condition
/// already substituted: `[l23 + l33 + 3] -> [l23 - l13]` for class 1 and
/// `[l13 + l33 + 3] -> [2l + 1]` for class 2.
pub fn act_odd_factor<D: Deformation + ?Sized>(
    ctx: &D,
    norm: &Normalization,
    kind: Kind,
    g: Generator,
    v: &GzVector,
) -> Result<LinComb<GzVector>> {
    let drop = ctx.tol() / 100.0;
    let LValues { l11, l13, l23, l, .. } = lvalues(v);
    let mut out = LinComb::zero(drop);
    let sqrt_ratio = |num: &[f64], den: f64| -> Result<f64> {
        let n: f64 = num.iter().map(|&x| ctx.bracket(x)).product();
        let d = ctx.bracket(den);
        if d == 0.0 {
            return Err(KacError::Degenerate(format!("vanishing denominator [{den}]")));
        }
        Ok((n / d).sqrt())
    };
    let mut emit = |target: Option<GzVector>, c: f64| -> Result<()> {
        match target {
            Some(t) => out.push(t, c),
            None if c.abs() <= drop => {}
            None => return Err(KacError::Degenerate(format!("coefficient {c} outside the factor basis"))),
        }
        Ok(())
    };
    match (kind, g, v.k()) {
        (Kind::Typical, ..) => return Err(KacError::NotNontypical),
        (_, Generator::E23, Submodule::V0) => {}
        (Kind::Class1, Generator::E23, Submodule::V1) => {
            let c = norm.a1 * sqrt_ratio(&[l11 - l23], 2.0 * l + 1.0)? * ctx.bracket(l23 - l13);
            emit(v.with_submodule(Submodule::V0), c)?;
        }
        (Kind::Class1, Generator::E32, Submodule::V0) => {
            let c = sqrt_ratio(&[l11 - l23], 2.0 * l + 1.0)? / norm.a1;
            emit(v.with_submodule(Submodule::V1), c)?;
        }
        (Kind::Class1, Generator::E32, Submodule::V1) => {}
        (Kind::Class2, Generator::E23, Submodule::V2) => {
            let c = norm.a2 * sqrt_ratio(&[l13 - l11], 2.0 * l)? * ctx.bracket(2.0 * l + 1.0);
            emit(v.with_submodule(Submodule::V0), c)?;
        }
        (Kind::Class2, Generator::E32, Submodule::V0) => {
            let c = (ctx.bracket(l13 - l11) * ctx.bracket(2.0 * l)).sqrt() / (norm.a2 * ctx.bracket(2.0 * l + 1.0));
            emit(v.with_submodule(Submodule::V2), c)?;
        }
        (Kind::Class2, Generator::E32, Submodule::V2) => {}
        (_, g, k) => {
            return Err(KacError::UnsupportedGenerator(format!("{g} on {k} of a {kind} factor module")));
        }
    }
    Ok(out)
}

/// `E23` and `E32` of the factor module from [`act_odd_factor`].
pub fn closed_form_factor_odd<D: Deformation + ?Sized>(
    ctx: &D,
    norm: &Normalization,
    hw: &HighestWeight,
) -> Result<(Matrix, Matrix)> {
    let kind = classify(hw).kind;
    let positions = factor_positions(hw)?;
    let basis = ModuleBasis::new(*hw);
    let vectors: Vec<GzVector> = positions.iter().map(|&p| basis.vectors()[p]).collect();
    let n = vectors.len();
    let mut e23 = Matrix::zeros(n, n);
    let mut e32 = Matrix::zeros(n, n);
    for (c, v) in vectors.iter().enumerate() {
        for (g, m) in [(Generator::E23, &mut e23), (Generator::E32, &mut e32)] {
            for (w, coeff) in act_odd_factor(ctx, norm, kind, g, v)?.terms() {
                let r = vectors.iter().position(|u| u == w).ok_or_else(|| {
                    KacError::BasisMismatch(format!("{w} is not in the factor basis"))
                })?;
                m.add_at(r, c, *coeff);
            }
        }
    }
    Ok((e23, e32))
}

/// Numerical irreducibility test: the module is declared irreducible iff the
/// cyclic subspace generated from every basis vector is the whole space.
///
/// Cyclic subspaces are grown by applying every generator to an orthonormal
/// basis of the current span (modified Gram-Schmidt, two passes). Generators
/// are rescaled to unit max-entry first; a residual survives when its norm
/// exceeds `sqrt(tol)`.
pub fn irreducibility_oracle<D: Deformation + ?Sized>(ctx: &D, set: &MatrixSet) -> bool {
    let n = set.dim();
    if n <= 1 {
        return true;
    }
    let threshold = ctx.tol().sqrt();
    let generators: Vec<Matrix> = set
        .iter()
        .filter(|(_, m)| m.max_abs() > 0.0)
        .map(|(_, m)| m.scale(&(1.0 / m.max_abs())))
        .collect();
    (0..n).all(|start| {
        let mut seed = vec![0.0; n];
        seed[start] = 1.0;
        cyclic_dimension(&generators, seed, threshold) == n
    })
}

fn cyclic_dimension(generators: &[Matrix], seed: Vec<f64>, threshold: f64) -> usize {
    let n = seed.len();
    let mut span: Vec<Vec<f64>> = vec![seed];
    let mut next = 0;
    while next < span.len() && span.len() < n {
        let v = span[next].clone();
        next += 1;
        for g in generators {
            let mut w = g.apply(&v);
            for _ in 0..2 {
                for u in &span {
                    let dot: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
                    for (wi, ui) in w.iter_mut().zip(u) {
                        *wi -= dot * ui;
                    }
                }
            }
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > threshold {
                span.push(w.iter().map(|x| x / norm).collect());
                if span.len() == n {
                    break;
                }
            }
        }
    }
    span.len()
}
