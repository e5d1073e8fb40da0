//! Defining relations of U_q[gl(2/1)] as matrix identities, the coproduct
//! on tensor products, and parameter sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::limit_compare;
use crate::error::{KacError, Result};
use crate::evenaction::Generator;
use crate::gzbasis::HighestWeight;
use crate::induced::{add_composites, build_module, BasisLabel, MatrixSet, Normalization};
use crate::matrix::Matrix;
use crate::qarith::{Deformation, QContext, DEFAULT_TOL};
use crate::typicality::{classify, factor_module, irreducibility_oracle};

/// Bound on the entrywise deviation from the classical module, used for
/// sweep cells with `q` within 1e-3 of 1.
pub const CLASSICAL_LIMIT_BOUND: f64 = 1e-4;

/// Parameters of the module a report refers to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportContext {
    pub hw: [f64; 3],
    pub q: f64,
    pub a: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation_id: String,
    pub max_residual: f64,
    pub scale: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<ReportContext>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl RelationReport {
    /// `passed` iff `max_residual <= tol * scale`.
    pub fn new(relation_id: impl Into<String>, max_residual: f64, scale: f64, tol: f64) -> Self {
        Self {
            relation_id: relation_id.into(),
            max_residual,
            scale,
            passed: max_residual <= tol * scale,
            context: None,
            detail: None,
        }
    }

    fn failure(relation_id: impl Into<String>, detail: String) -> Self {
        Self {
            relation_id: relation_id.into(),
            max_residual: f64::INFINITY,
            scale: 0.0,
            passed: false,
            context: None,
            detail: Some(detail),
        }
    }

    pub fn with_context(mut self, context: ReportContext) -> Self {
        self.context = Some(context);
        self
    }
}

/// Entry of the relation catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelationFamily {
    pub id: &'static str,
    pub statement: &'static str,
    pub applicable: bool,
}

pub const CATALOG: [RelationFamily; 10] = [
    RelationFamily { id: "cartan-commute", statement: "[E_ii, E_jj] = 0, [H_a, H_b] = 0", applicable: true },
    RelationFamily {
        id: "cartan-weight",
        statement: "[E_kk, E_ij] = (delta_ki - delta_kj) E_ij and the H1, H2 analogues",
        applicable: true,
    },
    RelationFamily { id: "cartan-definition", statement: "H1 = E11 - E22, H2 = E22 + E33", applicable: true },
    RelationFamily { id: "odd-even-commute", statement: "[E12, E32] = [E21, E23] = 0", applicable: true },
    RelationFamily { id: "even-bracket", statement: "[E12, E21] = [H1]", applicable: true },
    RelationFamily { id: "odd-anticommutator", statement: "{E23, E32} = [H2]", applicable: true },
    RelationFamily { id: "nilpotent", statement: "E23^2 = E32^2 = 0", applicable: true },
    RelationFamily {
        id: "serre",
        statement: "E12 E13 - q E13 E12 = 0, E21 E31 - q E31 E21 = 0",
        applicable: true,
    },
    RelationFamily { id: "composite-nilpotent", statement: "E13^2 = E31^2 = 0", applicable: true },
    RelationFamily {
        id: "extra-serre",
        statement: "quartic relations needed only when m, n >= 2",
        applicable: false,
    },
];

struct Checker<'a, D: ?Sized> {
    ctx: &'a D,
    reports: Vec<RelationReport>,
}

impl<D: Deformation + ?Sized> Checker<'_, D> {
    /// Records `lhs = rhs` with scale taken over `operands` and both sides.
    fn record(&mut self, id: String, lhs: &Matrix, rhs: &Matrix, operands: &[&Matrix]) {
        let scale = operands
            .iter()
            .chain([&lhs, &rhs])
            .fold(0f64, |m, x| m.max(x.max_abs()));
        let residual = lhs.max_abs_diff(rhs);
        self.reports.push(RelationReport::new(id, residual, scale, self.ctx.tol()));
    }

    /// `[h]` applied to the diagonal of a Cartan matrix.
    fn bracket_of(&self, h: &Matrix) -> Matrix {
        Matrix::diagonal(&h.diag().iter().map(|&x| self.ctx.bracket(x)).collect::<Vec<_>>())
    }
}

const CARTANS: [Generator; 5] = [Generator::E11, Generator::E22, Generator::E33, Generator::H1, Generator::H2];
const ROOTS: [Generator; 6] =
    [Generator::E12, Generator::E21, Generator::E23, Generator::E32, Generator::E13, Generator::E31];

/// Eigenvalue shift of `c` under `[c, g] = shift * g`.
fn adjoint_weight(c: Generator, g: Generator) -> f64 {
    let s = g.weight_shift();
    match c {
        Generator::E11 => s[0],
        Generator::E22 => s[1],
        Generator::E33 => s[2],
        Generator::H1 => s[0] - s[1],
        Generator::H2 => s[1] + s[2],
        _ => unreachable!("not a Cartan generator"),
    }
}

/// Every applicable relation of the catalog, one report per instance.
pub fn check_all<D: Deformation + ?Sized>(ctx: &D, set: &MatrixSet) -> Result<Vec<RelationReport>> {
    let mut ck = Checker { ctx, reports: Vec::new() };
    let n = set.dim();
    let zero = Matrix::zeros(n, n);

    for (i, &a) in CARTANS.iter().enumerate() {
        for &b in &CARTANS[i + 1..] {
            let (ma, mb) = (set.get(a)?, set.get(b)?);
            ck.record(format!("cartan-commute[{a},{b}]"), &Matrix::commutator(ma, mb), &zero, &[ma, mb]);
        }
    }
    for c in CARTANS {
        for g in ROOTS {
            let (mc, mg) = (set.get(c)?, set.get(g)?);
            let rhs = mg.scale(&adjoint_weight(c, g));
            ck.record(format!("cartan-weight[{c},{g}]"), &Matrix::commutator(mc, mg), &rhs, &[mc, mg]);
        }
    }
    let (e11, e22, e33) = (set.get(Generator::E11)?, set.get(Generator::E22)?, set.get(Generator::E33)?);
    let (h1, h2) = (set.get(Generator::H1)?, set.get(Generator::H2)?);
    ck.record("cartan-definition[H1]".into(), h1, &(e11 - e22), &[e11, e22]);
    ck.record("cartan-definition[H2]".into(), h2, &(e22 + e33), &[e22, e33]);

    let (e12, e21) = (set.get(Generator::E12)?, set.get(Generator::E21)?);
    let (e23, e32) = (set.get(Generator::E23)?, set.get(Generator::E32)?);
    let (e13, e31) = (set.get(Generator::E13)?, set.get(Generator::E31)?);
    ck.record("odd-even-commute[E12,E32]".into(), &Matrix::commutator(e12, e32), &zero, &[e12, e32]);
    ck.record("odd-even-commute[E21,E23]".into(), &Matrix::commutator(e21, e23), &zero, &[e21, e23]);

    let bh1 = ck.bracket_of(h1);
    let bh2 = ck.bracket_of(h2);
    ck.record("even-bracket[E12,E21]".into(), &Matrix::commutator(e12, e21), &bh1, &[e12, e21]);
    ck.record("odd-anticommutator{E23,E32}".into(), &Matrix::anticommutator(e23, e32), &bh2, &[e23, e32]);
    if (0..n).any(|r| (0..n).any(|c| r != c && *h1.get(r, c) != 0.0)) {
        ck.reports.push(RelationReport::failure("even-bracket[E12,E21]", "H1 is not diagonal".into()));
    }
    if (0..n).any(|r| (0..n).any(|c| r != c && *h2.get(r, c) != 0.0)) {
        ck.reports.push(RelationReport::failure("odd-anticommutator{E23,E32}", "H2 is not diagonal".into()));
    }

    ck.record("nilpotent[E23]".into(), &(e23 * e23), &zero, &[e23]);
    ck.record("nilpotent[E32]".into(), &(e32 * e32), &zero, &[e32]);

    let q = ctx.power(1.0);
    ck.record("serre[E12,E13]".into(), &Matrix::deformed_commutator(e12, e13, &q), &zero, &[e12, e13]);
    ck.record("serre[E21,E31]".into(), &Matrix::deformed_commutator(e21, e31, &q), &zero, &[e21, e31]);

    ck.record("composite-nilpotent[E13]".into(), &(e13 * e13), &zero, &[e13]);
    ck.record("composite-nilpotent[E31]".into(), &(e31 * e31), &zero, &[e31]);
    Ok(ck.reports)
}

pub fn all_passed(reports: &[RelationReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

fn cartan_diagonal(set: &MatrixSet, g: Generator) -> Result<Vec<f64>> {
    let m = set.get(g).map_err(|_| KacError::MissingCartan(g.to_string()))?;
    let n = m.rows();
    if (0..n).any(|r| (0..n).any(|c| r != c && *m.get(r, c) != 0.0)) {
        return Err(KacError::MissingCartan(format!("{g} is not diagonal")));
    }
    Ok(m.diag())
}

/// Module structure on `left (x) right` given by the coproduct
/// `D(x) = x (x) q^{h/2} + q^{-h/2} (x) x` for `x = E12, E21` (with `h = H1`)
/// and `x = E23, E32` (with `h = H2`), and `D(h) = h (x) 1 + 1 (x) h` for
/// the Cartan generators. Operators act with the Koszul sign
/// `(A (x) B)(u (x) v) = (-1)^{p(B) p(u)} Au (x) Bv`.
pub fn tensor_representation<D: Deformation + ?Sized>(
    ctx: &D,
    left: &MatrixSet,
    right: &MatrixSet,
) -> Result<MatrixSet> {
    let (dl, dr) = (left.dim(), right.dim());
    let mut basis = Vec::with_capacity(dl * dr);
    let mut odd = Vec::with_capacity(dl * dr);
    for i in 0..dl {
        for j in 0..dr {
            basis.push(BasisLabel::Product(i, j));
            odd.push(left.parities()[i] != right.parities()[j]);
        }
    }
    let mut out = MatrixSet::new(basis, odd)?;
    let left_odd = left.parities().to_vec();
    let tensor = |a: &Matrix, b: &Matrix, b_odd: bool| a.kron_signed(b, |k, _| b_odd && left_odd[k]);
    let (il, ir) = (Matrix::identity(dl), Matrix::identity(dr));

    for g in [Generator::E11, Generator::E22, Generator::E33, Generator::H1, Generator::H2] {
        let l = Matrix::diagonal(&cartan_diagonal(left, g)?);
        let r = Matrix::diagonal(&cartan_diagonal(right, g)?);
        out.insert(g, &l.kron(&ir) + &il.kron(&r))?;
    }
    let half_power = |set: &MatrixSet, h: Generator, sign: f64| -> Result<Matrix> {
        let d = cartan_diagonal(set, h)?;
        Ok(Matrix::diagonal(&d.iter().map(|&x| ctx.power(sign * x / 2.0)).collect::<Vec<_>>()))
    };
    for (g, h) in [
        (Generator::E12, Generator::H1),
        (Generator::E21, Generator::H1),
        (Generator::E23, Generator::H2),
        (Generator::E32, Generator::H2),
    ] {
        let k_right = half_power(right, h, 1.0)?;
        let k_left_inv = half_power(left, h, -1.0)?;
        let first = tensor(left.get(g)?, &k_right, false);
        let second = tensor(&k_left_inv, right.get(g)?, g.is_odd());
        out.insert(g, &first + &second)?;
    }
    add_composites(ctx, &mut out)?;
    Ok(out)
}

/// Grid of modules and parameters for [`sweep`].
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub weights: Vec<HighestWeight>,
    pub qs: Vec<f64>,
    pub norms: Vec<Normalization>,
    pub tol: f64,
}

impl SweepConfig {
    pub fn empty() -> Self {
        Self { weights: Vec::new(), qs: Vec::new(), norms: Vec::new(), tol: DEFAULT_TOL }
    }

    /// `m23 in {-1, 0, 2}`, `m13 - m23 in 0..=4`, `m33` at both atypical
    /// points and three generic values; three values of `q`; three
    /// normalizations.
    pub fn default_grid() -> Self {
        Self {
            weights: default_weights(4),
            qs: vec![1.1, 1.7, 2.3],
            norms: default_norms(),
            tol: 1e-9,
        }
    }

    pub fn cells(&self) -> usize {
        self.weights.len() * self.qs.len() * self.norms.len()
    }
}

/// Highest weights with `m23 in {-1, 0, 2}`, `m13 - m23 <= max_delta`, and
/// `m33 in {-m13 - 1, -m23, 0.37, 1, -2.5}` without repeats.
pub fn default_weights(max_delta: u32) -> Vec<HighestWeight> {
    let mut out = Vec::new();
    for m23 in [-1.0, 0.0, 2.0] {
        for delta in 0..=max_delta {
            let m13 = m23 + f64::from(delta);
            let mut m33s: Vec<f64> = Vec::new();
            for m33 in [-m13 - 1.0, -m23, 0.37, 1.0, -2.5] {
                let m33 = m33 + 0.0;
                if !m33s.contains(&m33) {
                    m33s.push(m33);
                }
            }
            for m33 in m33s {
                out.push(HighestWeight::new(m13, m23, m33).expect("valid grid weight"));
            }
        }
    }
    out
}

pub fn default_norms() -> Vec<Normalization> {
    [(1.0, 1.0, 1.0), (2.0, 1.0, 0.5), (1.0, -1.0, 3.0)]
        .into_iter()
        .map(|(a, b, c)| Normalization::new(a, b, c).expect("nonzero"))
        .collect()
}

fn cell_reports(hw: &HighestWeight, q: f64, norm: &Normalization, tol: f64) -> Vec<RelationReport> {
    let context = ReportContext { hw: hw.as_array(), q, a: norm.as_array() };
    let mut reports = Vec::new();
    let ctx = match QContext::with_tol(q, tol) {
        Ok(ctx) => ctx,
        Err(e) => return vec![RelationReport::failure("build", e.to_string()).with_context(context)],
    };
    match build_module(&ctx, norm, hw).and_then(|set| Ok((check_all(&ctx, &set)?, set))) {
        Ok((checks, set)) => {
            reports.extend(checks);
            let kind = classify(hw).kind;
            let irreducible = irreducibility_oracle(&ctx, &set);
            let agree = classify(hw).is_typical() == irreducible;
            let mut r = RelationReport::new("typicality-consistency", if agree { 0.0 } else { 1.0 }, 0.0, tol);
            r.detail = Some(format!("{kind}, oracle irreducible = {irreducible}"));
            reports.push(r);
        }
        Err(e) => reports.push(RelationReport::failure("build", e.to_string())),
    }
    if !classify(hw).is_typical() {
        match factor_module(&ctx, norm, hw).and_then(|f| check_all(&ctx, &f)) {
            Ok(checks) => reports.extend(checks.into_iter().map(|mut r| {
                r.relation_id = format!("factor/{}", r.relation_id);
                r
            })),
            Err(e) => reports.push(RelationReport::failure("factor/build", e.to_string())),
        }
    }
    if q > 1.0 && q <= 1.001 {
        match limit_compare(hw, q, norm) {
            Ok(dev) => {
                let mut r = RelationReport::new("classical-limit", dev, 1.0, CLASSICAL_LIMIT_BOUND);
                r.detail = Some(format!("bound {CLASSICAL_LIMIT_BOUND:e}"));
                reports.push(r);
            }
            Err(e) => reports.push(RelationReport::failure("classical-limit", e.to_string())),
        }
    }
    reports.into_iter().map(|r| r.with_context(context.clone())).collect()
}

/// Runs every cell of the grid in parallel. Reports come back in grid order
/// (weights, then `q`, then normalizations) regardless of scheduling.
pub fn sweep(config: &SweepConfig) -> Vec<RelationReport> {
    let cells: Vec<(HighestWeight, f64, Normalization)> = config
        .weights
        .iter()
        .flat_map(|hw| config.qs.iter().flat_map(move |&q| config.norms.iter().map(move |n| (*hw, q, *n))))
        .collect();
    cells
        .par_iter()
        .map(|(hw, q, norm)| cell_reports(hw, *q, norm, config.tol))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}
