//! Exact rational model of the classical modules.
//!
//! Classical matrix elements are square roots of rationals. Conjugating by a
//! diagonal matrix `diag(sqrt(g_i))` with rational `g_i` turns every entry
//! into a rational number, so all relations can be checked without rounding.

use std::collections::VecDeque;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{KacError, Result};
use crate::evenaction::Generator;
use crate::gzbasis::{GzVector, HighestWeight, ModuleBasis, Submodule};
use crate::induced::{BasisLabel, MatrixSet, Normalization};
use crate::matrix::Matrix;
use crate::typicality::factor_positions;

/// Exact value of an `f64`.
pub fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| KacError::InvalidWeight(format!("{x} is not finite")))
}

/// Exact rational square root, if there is one.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(BigRational::new(root(x.numer())?, root(x.denom())?))
}

/// Entry `coef * sqrt(radicand)` of a classical generator matrix.
#[derive(Clone, Debug, PartialEq)]
struct Entry {
    row: usize,
    col: usize,
    coef: BigRational,
    radicand: BigRational,
}

impl Entry {
    fn square(&self) -> BigRational {
        &self.coef * &self.coef * &self.radicand
    }
}

struct Labels {
    l11: BigRational,
    l12: BigRational,
    l22: BigRational,
    l13: BigRational,
    l23: BigRational,
    c1: BigRational,
    c2: BigRational,
    two_l: BigRational,
}

/// Exact `(m11, m12, m22, m31)` of a pattern, from the rational first row
/// and the integer offsets of its submodule.
fn exact_pattern(v: &GzVector) -> Result<[BigRational; 4]> {
    let top = v.top();
    let offsets: [i64; 3] = match v.k() {
        Submodule::V0 => [0, 0, 0],
        Submodule::V1 => [0, -1, 1],
        Submodule::V2 => [-1, 0, 1],
        Submodule::V3 => [-1, -1, 2],
    };
    let int = |n: i64| BigRational::from_integer(n.into());
    let m12 = rational(top.m13)? + int(offsets[0]);
    let m22 = rational(top.m23)? + int(offsets[1]);
    let m31 = rational(top.m33)? + int(offsets[2]);
    let m11 = &m12 - int(v.depth() as i64);
    Ok([m11, m12, m22, m31])
}

fn labels(v: &GzVector) -> Result<Labels> {
    let one = BigRational::one();
    let two = &one + &one;
    let top = v.top();
    let [m11, m12, m22, _] = exact_pattern(v)?;
    let (m13, m23, m33) = (rational(top.m13)?, rational(top.m23)?, rational(top.m33)?);
    Ok(Labels {
        l11: m11 - &one,
        l12: m12 - &one,
        l22: m22 - &two,
        l13: &m13 - &one,
        l23: &m23 - &two,
        c1: &m13 + &m33 + &one,
        c2: &m23 + &m33,
        two_l: m13 - m23,
    })
}

fn checked_div(a: BigRational, b: &BigRational) -> Result<BigRational> {
    if b.is_zero() {
        return Err(KacError::Degenerate("vanishing denominator".into()));
    }
    Ok(a / b)
}

/// Off-diagonal entries of `E12`, `E21`, `E23`, `E32` in the classical limit.
fn chevalley_entries(
    basis: &ModuleBasis,
    norm: &Normalization,
    g: Generator,
) -> Result<Vec<Entry>> {
    let [a1, a2, a3] = norm.as_array().map(rational);
    let (a1, a2, a3) = (a1?, a2?, a3?);
    let one = BigRational::one();
    let mut out = Vec::new();
    for (col, v) in basis.vectors().iter().enumerate() {
        let lab = labels(v)?;
        let d = &lab.two_l + &one;
        let mut terms: Vec<(Option<GzVector>, BigRational, BigRational)> = Vec::new();
        match (g, v.k()) {
            (Generator::E12, _) => terms.push((
                v.shift_m11(1),
                one.clone(),
                (&lab.l12 - &lab.l11) * (&lab.l11 - &lab.l22),
            )),
            (Generator::E21, _) => terms.push((
                v.shift_m11(-1),
                one.clone(),
                (&lab.l12 - &lab.l11 + &one) * (&lab.l11 - &lab.l22 - &one),
            )),
            (Generator::E23, Submodule::V0) | (Generator::E32, Submodule::V3) => {}
            (Generator::E23, Submodule::V1) => terms.push((
                v.with_submodule(Submodule::V0),
                &a1 * &lab.c2,
                checked_div(&lab.l11 - &lab.l23, &d)?,
            )),
            (Generator::E23, Submodule::V2) => terms.push((
                v.with_submodule(Submodule::V0),
                &a2 * &lab.c1,
                checked_div(&lab.l13 - &lab.l11, &lab.two_l)?,
            )),
            (Generator::E23, Submodule::V3) => {
                terms.push((
                    v.with_submodule(Submodule::V1),
                    checked_div(&a3 * &lab.c1, &a1)?,
                    checked_div(&lab.l13 - &lab.l11, &d)?,
                ));
                terms.push((
                    v.with_submodule(Submodule::V2),
                    -checked_div(&a3 * &lab.c2, &(&a2 * &d))?,
                    (&lab.l11 - &lab.l23) * &lab.two_l,
                ));
            }
            (Generator::E32, Submodule::V0) => {
                terms.push((
                    v.with_submodule(Submodule::V1),
                    checked_div(one.clone(), &a1)?,
                    checked_div(&lab.l11 - &lab.l23, &d)?,
                ));
                terms.push((
                    v.with_submodule(Submodule::V2),
                    checked_div(one.clone(), &(&a2 * &d))?,
                    (&lab.l13 - &lab.l11) * &lab.two_l,
                ));
            }
            (Generator::E32, Submodule::V1) => terms.push((
                v.with_submodule(Submodule::V3),
                checked_div(a1.clone(), &a3)?,
                checked_div(&lab.l13 - &lab.l11, &d)?,
            )),
            (Generator::E32, Submodule::V2) => terms.push((
                v.with_submodule(Submodule::V3),
                -checked_div(a2.clone(), &a3)?,
                checked_div(&lab.l11 - &lab.l23, &lab.two_l)?,
            )),
            (other, _) => return Err(KacError::UnsupportedGenerator(other.to_string())),
        }
        for (target, coef, radicand) in terms {
            if radicand.is_negative() {
                return Err(KacError::Domain {
                    arg: radicand.to_f64().unwrap_or(f64::NAN),
                    value: radicand.to_f64().unwrap_or(f64::NAN),
                });
            }
            let entry = |row| Entry { row, col, coef: coef.clone(), radicand: radicand.clone() };
            match target {
                Some(t) => {
                    let e = entry(basis.position(&t)?);
                    if !e.square().is_zero() {
                        out.push(e);
                    }
                }
                None if entry(0).square().is_zero() => {}
                None => {
                    return Err(KacError::Degenerate(format!("nonzero {g} coefficient leaves the basis at {v}")))
                }
            }
        }
    }
    Ok(out)
}

/// Gauge squares `g_i` such that `sign * sqrt(square * g_c / g_r)` is rational
/// for every entry. Each connected component is rooted at `g = 1` and every
/// spanning-tree entry becomes `+-1`.
fn gauge_squares(n: usize, entries: &[Entry]) -> Result<Vec<BigRational>> {
    let mut gauge: Vec<Option<BigRational>> = vec![None; n];
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in entries.iter().enumerate() {
        adjacency[e.row].push(i);
        adjacency[e.col].push(i);
    }
    for root in 0..n {
        if gauge[root].is_some() {
            continue;
        }
        gauge[root] = Some(BigRational::one());
        let mut queue = VecDeque::from([root]);
        while let Some(node) = queue.pop_front() {
            for &i in &adjacency[node] {
                let e = &entries[i];
                let sq = e.square();
                match (&gauge[e.row], &gauge[e.col]) {
                    (None, Some(gc)) => {
                        gauge[e.row] = Some(&sq * gc);
                        queue.push_back(e.row);
                    }
                    (Some(gr), None) => {
                        gauge[e.col] = Some(gr / &sq);
                        queue.push_back(e.col);
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(gauge.into_iter().map(|g| g.expect("every node is reached")).collect())
}

fn gauged_value(e: &Entry, gauge: &[BigRational]) -> Result<BigRational> {
    let magnitude = rational_sqrt(&(e.square() * &gauge[e.col] / &gauge[e.row]))
        .ok_or_else(|| KacError::Irrational(format!("entry ({}, {})", e.row, e.col)))?;
    Ok(if e.coef.is_negative() { -magnitude } else { magnitude })
}

/// Classical module in rational arithmetic, expressed in the gauged basis
/// `sqrt(g_i) * v_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactModule {
    pub set: MatrixSet<BigRational>,
    pub gauge: Vec<BigRational>,
}

impl ExactModule {
    /// Undo the gauge numerically: the float classical module conjugated by
    /// `diag(sqrt(g))` should equal `set` converted to `f64`.
    pub fn to_f64(&self) -> MatrixSet {
        self.set.map(|x| x.to_f64().unwrap_or(f64::NAN))
    }

    /// Applies the same gauge to a float matrix set over the same basis.
    pub fn gauge_float(&self, set: &MatrixSet) -> MatrixSet {
        let scale: Vec<f64> = self.gauge.iter().map(|g| g.to_f64().unwrap_or(f64::NAN).sqrt()).collect();
        let mut out = MatrixSet::new(set.basis().to_vec(), set.parities().to_vec()).expect("same shape");
        for (g, m) in set.iter() {
            let conj = Matrix::from_fn(m.rows(), m.cols(), |r, c| m.get(r, c) * scale[c] / scale[r]);
            out.insert(g, conj).expect("same shape");
        }
        out
    }
}

pub fn exact_classical_module(hw: &HighestWeight, norm: &Normalization) -> Result<ExactModule> {
    let basis = ModuleBasis::new(*hw);
    let n = basis.len();
    let chevalley = [Generator::E12, Generator::E21, Generator::E23, Generator::E32];
    let mut per_generator = Vec::new();
    for g in chevalley {
        per_generator.push((g, chevalley_entries(&basis, norm, g)?));
    }
    let all: Vec<Entry> = per_generator.iter().flat_map(|(_, e)| e.iter().cloned()).collect();
    let gauge = gauge_squares(n, &all)?;

    let labels = basis.vectors().iter().map(|v| BasisLabel::Pattern(*v)).collect();
    let odd = basis.vectors().iter().map(|v| v.k().is_odd()).collect();
    let mut set = MatrixSet::new(labels, odd)?;
    for (g, entries) in per_generator {
        let mut m = Matrix::zeros(n, n);
        for e in &entries {
            m.add_at(e.row, e.col, gauged_value(e, &gauge)?);
        }
        set.insert(g, m)?;
    }
    let weights: Vec<[BigRational; 3]> = basis
        .vectors()
        .iter()
        .map(|v| {
            let [m11, m12, m22, m31] = exact_pattern(v)?;
            Ok([m11.clone(), m12 + m22 - m11, m31])
        })
        .collect::<Result<_>>()?;
    for (g, f) in [
        (Generator::E11, (|w: &[BigRational; 3]| w[0].clone()) as fn(&[BigRational; 3]) -> BigRational),
        (Generator::E22, |w| w[1].clone()),
        (Generator::E33, |w| w[2].clone()),
        (Generator::H1, |w| &w[0] - &w[1]),
        (Generator::H2, |w| &w[1] + &w[2]),
    ] {
        let diag: Vec<BigRational> = weights.iter().map(f).collect();
        set.insert(g, Matrix::diagonal(&diag))?;
    }
    add_exact_composites(&mut set)?;
    Ok(ExactModule { set, gauge })
}

/// `E13 = [E12, E23]` and `E31 = -[E21, E32]`.
fn add_exact_composites(set: &mut MatrixSet<BigRational>) -> Result<()> {
    let e13 = Matrix::commutator(set.get(Generator::E12)?, set.get(Generator::E23)?);
    let e31 = Matrix::commutator(set.get(Generator::E21)?, set.get(Generator::E32)?).scale(&-BigRational::one());
    set.insert(Generator::E13, e13)?;
    set.insert(Generator::E31, e31)
}

/// Irreducible factor of a nontypical classical module, exactly.
pub fn exact_factor_module(hw: &HighestWeight, norm: &Normalization) -> Result<MatrixSet<BigRational>> {
    let full = exact_classical_module(hw, norm)?;
    Ok(full.set.restrict(&factor_positions(hw)?))
}

/// Grading of the index `i`: `1` and `2` are even, `3` is odd.
pub fn weyl_parity(i: usize) -> bool {
    i == 3
}

/// `(e_ij)_kl = delta_ik delta_jl`, with 1-based `i`, `j`.
pub fn weyl_matrix(i: usize, j: usize) -> Matrix<BigRational> {
    Matrix::from_fn(3, 3, |r, c| {
        if r + 1 == i && c + 1 == j {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    })
}

/// The defining 3-dimensional representation `E_ij -> e_ij`.
pub fn defining_representation() -> MatrixSet<BigRational> {
    let basis = (0..3).map(BasisLabel::Standard).collect();
    let odd = (1..=3).map(weyl_parity).collect();
    let mut set = MatrixSet::new(basis, odd).expect("three labels");
    for g in Generator::WEYL {
        let (i, j) = g.indices().expect("Weyl generator");
        set.insert(g, weyl_matrix(i, j)).expect("3x3");
    }
    set.insert(Generator::H1, &weyl_matrix(1, 1) - &weyl_matrix(2, 2)).expect("3x3");
    set.insert(Generator::H2, &weyl_matrix(2, 2) + &weyl_matrix(3, 3)).expect("3x3");
    set
}

fn generator_parity(g: Generator) -> bool {
    let (i, j) = g.indices().expect("Weyl generator");
    weyl_parity(i) != weyl_parity(j)
}

/// Pairs `(E_ij, E_kl)` violating
/// `[E_ij, E_kl} = delta_jk E_il - (-1)^(p p') delta_il E_kj`.
pub fn super_bracket_violations(set: &MatrixSet<BigRational>) -> Result<Vec<(Generator, Generator)>> {
    let mut bad = Vec::new();
    let n = set.dim();
    for a in Generator::WEYL {
        for b in Generator::WEYL {
            let (i, j) = a.indices().expect("Weyl generator");
            let (k, l) = b.indices().expect("Weyl generator");
            let (pa, pb) = (generator_parity(a), generator_parity(b));
            let lhs = Matrix::supercommutator(set.get(a)?, pa, set.get(b)?, pb);
            let mut rhs = Matrix::zeros(n, n);
            if j == k {
                rhs = &rhs + set.get(Generator::from_indices(i, l).expect("valid"))?;
            }
            if i == l {
                let term = set.get(Generator::from_indices(k, j).expect("valid"))?;
                rhs = if pa && pb { &rhs + term } else { &rhs - term };
            }
            if lhs != rhs {
                bad.push((a, b));
            }
        }
    }
    Ok(bad)
}

/// Change of basis `P` with `P^-1 M(E_ij) P = e_ij` for all nine generators.
///
/// Basis vectors are matched to `e_1, e_2, e_3` by their `(E11, E22, E33)`
/// weights, then rescaled so that `E21` and `E32` act with coefficient 1.
pub fn defining_rep_equivalence(module: &MatrixSet<BigRational>) -> Result<Matrix<BigRational>> {
    if module.dim() != 3 {
        return Err(KacError::Dimension { expected: 3, found: module.dim() });
    }
    let cartan = [module.get(Generator::E11)?, module.get(Generator::E22)?, module.get(Generator::E33)?];
    let mut slot = [usize::MAX; 3];
    for v in 0..3 {
        if cartan.iter().any(|c| (0..3).any(|r| r != v && !c.get(r, v).is_zero())) {
            return Err(KacError::NotEquivalent("Cartan generators are not diagonal".into()));
        }
        let weight: Vec<&BigRational> = cartan.iter().map(|c| c.get(v, v)).collect();
        if let Some(k) = (0..3).find(|&k| (0..3).all(|o| weight[o].is_one() == (o == k) && (o == k || weight[o].is_zero()))) {
            slot[k] = v;
        }
    }
    if slot.contains(&usize::MAX) {
        return Err(KacError::NotEquivalent("weights are not those of the defining representation".into()));
    }
    let mut scale = [BigRational::one(), BigRational::zero(), BigRational::zero()];
    for (k, g) in [(1, Generator::E21), (2, Generator::E32)] {
        let c = module.get(g)?.get(slot[k], slot[k - 1]).clone();
        if c.is_zero() {
            return Err(KacError::NotEquivalent(format!("{g} does not connect the weight vectors")));
        }
        scale[k] = &scale[k - 1] * &c;
    }
    let p = Matrix::from_fn(3, 3, |r, c| if r == slot[c] { scale[c].clone() } else { BigRational::zero() });
    let p_inv = Matrix::from_fn(3, 3, |r, c| {
        if c == slot[r] {
            BigRational::one() / &scale[r]
        } else {
            BigRational::zero()
        }
    });
    for g in Generator::WEYL {
        let (i, j) = g.indices().expect("Weyl generator");
        if &(&p_inv * module.get(g)?) * &p != weyl_matrix(i, j) {
            return Err(KacError::NotEquivalent(format!("{g} does not conjugate to e{i}{j}")));
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::classical_module;

    fn hw(a: f64, b: f64, c: f64) -> HighestWeight {
        HighestWeight::new(a, b, c).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_sqrt_examples() {
        assert_eq!(rational_sqrt(&r(9, 4)), Some(r(3, 2)));
        assert_eq!(rational_sqrt(&r(2, 1)), None);
        assert_eq!(rational_sqrt(&r(-1, 1)), None);
        assert_eq!(rational_sqrt(&r(0, 1)), Some(r(0, 1)));
    }

    #[test]
    fn defining_representation_satisfies_brackets() {
        assert!(super_bracket_violations(&defining_representation()).unwrap().is_empty());
        let p = defining_rep_equivalence(&defining_representation()).unwrap();
        assert_eq!(p, Matrix::identity(3));
    }

    #[test]
    fn classical_modules_satisfy_brackets() {
        let norms = [Normalization::default(), Normalization::new(2.0, -1.0, 0.5).unwrap()];
        for w in [hw(1.0, 0.0, 1.0), hw(0.0, 0.0, 0.0), hw(2.0, -1.0, 0.375), hw(3.0, 0.0, -4.0), hw(4.0, 2.0, -2.0)] {
            for norm in &norms {
                let exact = exact_classical_module(&w, norm).unwrap();
                assert!(super_bracket_violations(&exact.set).unwrap().is_empty(), "{w}");
                assert!(exact.set.parity_violations().is_empty());
            }
        }
    }

    #[test]
    fn exact_agrees_with_float() {
        let norm = Normalization::new(2.0, 1.0, 0.5).unwrap();
        for w in [hw(1.0, 0.0, 1.0), hw(3.0, 1.0, 0.37), hw(2.0, 0.0, -3.0)] {
            let exact = exact_classical_module(&w, &norm).unwrap();
            let float = exact.gauge_float(&classical_module(&w, &norm).unwrap());
            let converted = exact.to_f64();
            for (g, m) in float.iter() {
                let diff = m.max_abs_diff(converted.get(g).unwrap());
                assert!(diff <= 1e-12 * m.max_abs().max(1.0), "{w} {g}: {diff}");
            }
        }
    }

    #[test]
    fn fundamental_factor_is_defining() {
        let factor = exact_factor_module(&hw(1.0, 0.0, 0.0), &Normalization::default()).unwrap();
        assert_eq!(factor.dim(), 3);
        defining_rep_equivalence(&factor).unwrap();
        let scaled = exact_factor_module(&hw(1.0, 0.0, 0.0), &Normalization::new(3.0, -2.0, 0.25).unwrap()).unwrap();
        defining_rep_equivalence(&scaled).unwrap();
    }

    #[test]
    fn equivalence_dimension_errors() {
        let trivial = exact_factor_module(&hw(0.0, 0.0, 0.0), &Normalization::default()).unwrap();
        assert_eq!(defining_rep_equivalence(&trivial), Err(KacError::Dimension { expected: 3, found: 1 }));
        let five = exact_factor_module(&hw(1.0, 0.0, -2.0), &Normalization::default()).unwrap();
        assert_eq!(defining_rep_equivalence(&five), Err(KacError::Dimension { expected: 3, found: 5 }));
    }

    #[test]
    fn dual_fundamental_is_not_defining() {
        // The other three-dimensional nontypical module has different weights.
        let other = exact_factor_module(&hw(0.0, 0.0, -1.0), &Normalization::default()).unwrap();
        assert_eq!(other.dim(), 3);
        assert!(matches!(defining_rep_equivalence(&other), Err(KacError::NotEquivalent(_))));
    }
}
