//! The `kacmod/1` export bundle: a JSON document holding one module's basis,
//! generator matrices, classification and relation reports.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{KacError, Result};
use crate::evenaction::Generator;
use crate::gzbasis::{GzVector, HighestWeight, ModuleBasis, Submodule};
use crate::induced::{build_module, BasisLabel, MatrixSet, Normalization};
use crate::matrix::Matrix;
use crate::qarith::QContext;
use crate::relations::{check_all, RelationReport};
use crate::typicality::{classify, factor_module};

pub const FORMAT_TAG: &str = "kacmod/1";

/// Order of the basis records in every bundle.
pub const BASIS_ORDERING: &str = "submodule-major (V0, V1, V2, V3), m11 descending within each submodule";

/// A real number written with 17 significant digits, so that reading it back
/// reproduces the same `f64` bit for bit. Non-finite values become `null`.
#[derive(Clone, Copy, Debug)]
pub struct Real(pub f64);

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let text = format!("{:.16e}", self.0);
        serde_json::Number::from_str(&text).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        // Parse the literal text with the correctly rounded std parser.
        match Option::<serde_json::Number>::deserialize(d)? {
            Some(n) => n.to_string().parse().map(Real).map_err(serde::de::Error::custom),
            None => Ok(Real(f64::NAN)),
        }
    }
}

fn reals<const N: usize>(x: [f64; N]) -> [Real; N] {
    x.map(Real)
}

fn values<const N: usize>(x: &[Real; N]) -> [f64; N] {
    x.map(|r| r.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool_version: String,
    pub hw: [Real; 3],
    pub q: Real,
    pub a: [Real; 3],
    pub basis_ordering: String,
    /// `"full"` or `"factor"`.
    pub module: String,
}

/// One reduced pattern: first row `top`, middle row `mid`, `m11`, and the
/// submodule index `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisRecord {
    pub k: u8,
    pub top: [Real; 3],
    pub mid: [Real; 3],
    pub m11: Real,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub kind: String,
    pub c1: Real,
    pub c2: Real,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub relation_id: String,
    pub max_residual: Real,
    pub scale: Real,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl From<&RelationReport> for ReportRecord {
    fn from(r: &RelationReport) -> Self {
        Self {
            relation_id: r.relation_id.clone(),
            max_residual: Real(r.max_residual),
            scale: Real(r.scale),
            passed: r.passed,
            detail: r.detail.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportBundle {
    pub format: String,
    pub metadata: Metadata,
    pub basis: Vec<BasisRecord>,
    /// Row-major entries keyed by generator name.
    pub matrices: BTreeMap<String, Vec<Real>>,
    pub classification: ClassificationRecord,
    pub reports: Vec<ReportRecord>,
}

impl ExportBundle {
    /// Builds the module (or its irreducible factor when `factor` is set and
    /// the module is nontypical) and runs the relation suite on it.
    pub fn build(hw: &HighestWeight, q: f64, norm: &Normalization, factor: bool, tol: f64) -> Result<Self> {
        let ctx = QContext::with_tol(q, tol)?;
        let class = classify(hw);
        let use_factor = factor && !class.is_typical();
        let set = if use_factor { factor_module(&ctx, norm, hw)? } else { build_module(&ctx, norm, hw)? };
        let reports = check_all(&ctx, &set)?;
        Ok(Self {
            format: FORMAT_TAG.to_string(),
            metadata: Metadata {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                hw: reals(hw.as_array()),
                q: Real(q),
                a: reals(norm.as_array()),
                basis_ordering: BASIS_ORDERING.to_string(),
                module: if use_factor { "factor" } else { "full" }.to_string(),
            },
            basis: set.basis().iter().map(basis_record).collect::<Result<_>>()?,
            matrices: set
                .iter()
                .map(|(g, m)| (g.name().to_string(), m.as_slice().iter().copied().map(Real).collect()))
                .collect(),
            classification: ClassificationRecord {
                kind: class.kind.name().to_string(),
                c1: Real(class.c1),
                c2: Real(class.c2),
            },
            reports: reports.iter().map(ReportRecord::from).collect(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.format != FORMAT_TAG {
            return Err(KacError::Format(format!("format tag {:?}, expected {FORMAT_TAG:?}", self.format)));
        }
        if self.metadata.q.0 == 1.0 {
            return Err(KacError::Format("q = 1 is not allowed".into()));
        }
        let expected = self.basis.len() * self.basis.len();
        for (name, entries) in &self.matrices {
            if entries.len() != expected {
                return Err(KacError::Format(format!(
                    "matrix {name} has {} entries, expected {expected}",
                    entries.len()
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| KacError::Format(e.to_string()))?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let bundle: Self = serde_json::from_str(text).map_err(|e| KacError::Format(e.to_string()))?;
        bundle.validate()?;
        Ok(bundle)
    }

    /// The highest weight recorded in the metadata.
    pub fn highest_weight(&self) -> Result<HighestWeight> {
        let [m13, m23, m33] = values(&self.metadata.hw);
        HighestWeight::new(m13, m23, m33)
    }

    /// Generator matrices as stored, over the recorded basis.
    pub fn matrix_set(&self) -> Result<MatrixSet> {
        let labels = self
            .basis
            .iter()
            .map(|b| {
                let [m13, m23, m33] = values(&b.top);
                let k = Submodule::from_index(i64::from(b.k))?;
                Ok(BasisLabel::Pattern(GzVector::new(HighestWeight::new(m13, m23, m33)?, k, b.m11.0)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let odd = self.basis.iter().map(|b| b.k == 1 || b.k == 2).collect();
        let mut set = MatrixSet::new(labels, odd)?;
        let n = self.basis.len();
        for (name, entries) in &self.matrices {
            let g: Generator = name.parse()?;
            let m = Matrix::from_row_major(n, n, entries.iter().map(|r| r.0).collect())
                .ok_or_else(|| KacError::Format(format!("matrix {name} has the wrong length")))?;
            set.insert(g, m)?;
        }
        Ok(set)
    }
}

fn basis_record(label: &BasisLabel) -> Result<BasisRecord> {
    match label {
        BasisLabel::Pattern(v) => Ok(BasisRecord {
            k: v.k().index() as u8,
            top: reals(v.top().as_array()),
            mid: reals(v.mid()),
            m11: Real(v.m11()),
        }),
        other => Err(KacError::Format(format!("cannot export basis label {other:?}"))),
    }
}

pub fn write_bundle(bundle: &ExportBundle, path: &Path) -> Result<()> {
    fs::write(path, bundle.to_json()?).map_err(|e| KacError::Format(format!("{}: {e}", path.display())))
}

pub fn read_bundle(path: &Path) -> Result<ExportBundle> {
    let text = fs::read_to_string(path).map_err(|e| KacError::Format(format!("{}: {e}", path.display())))?;
    ExportBundle::from_json(&text)
}

/// Positions of the stored basis inside the full module basis, so bundles
/// holding a factor module can be compared with the full module.
pub fn positions_in_full_module(bundle: &ExportBundle) -> Result<Vec<usize>> {
    let full = ModuleBasis::new(bundle.highest_weight()?);
    bundle
        .matrix_set()?
        .basis()
        .iter()
        .map(|label| match label {
            BasisLabel::Pattern(v) => full.position(v),
            other => Err(KacError::Format(format!("unexpected label {other:?}"))),
        })
        .collect()
}
