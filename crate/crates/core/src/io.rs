//! JSON problem files and result encodings.
//!
//! A problem file names the basis of one algebra, subalgebras of it by
//! coefficient vectors, and families of those subalgebras. The label `L` is
//! reserved for the whole algebra. Scalars are written as `[re, im]`; input
//! also accepts bare real numbers.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::characters::Character;
use crate::error::{Error, Result};
use crate::koszul::SpectrumResult;
use crate::lie::{verify_named_algebra, DirectedIdealFamily, MatrixLieAlgebra, Subalgebra};
use crate::limit::LimitReport;
use crate::numeric::{CVector, JsonScalar, Matrix, Scalar, ToleranceConfig};

/// Label of the whole algebra in problem files.
pub const WHOLE: &str = "L";

/// `{"rows", "cols", "entries": [[re, im], …]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<JsonScalar>,
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.row_major().into_iter().map(JsonScalar::from).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        Matrix::new(
            self.rows,
            self.cols,
            self.entries.iter().map(|&z| Scalar::from(z)).collect(),
        )
    }
}

impl PartialEq for JsonScalar {
    fn eq(&self, other: &Self) -> bool {
        Scalar::from(*self) == Scalar::from(*other)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BasisEntry {
    pub name: String,
    pub matrix: MatrixJson,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FamilyJson {
    pub ideals: Vec<String>,
    #[serde(default)]
    pub order: Vec<[String; 2]>,
}

/// The on-disk problem format.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProblemFile {
    pub space_dim: usize,
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub subalgebras: BTreeMap<String, Vec<Vec<JsonScalar>>>,
    #[serde(default)]
    pub families: BTreeMap<String, FamilyJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tasks: Option<Value>,
}

/// A problem file with every object verified and resolved.
#[derive(Debug, Clone)]
pub struct Problem {
    pub algebra: Arc<MatrixLieAlgebra>,
    /// Includes the whole algebra under [`WHOLE`].
    pub subalgebras: BTreeMap<String, Subalgebra>,
    pub families: BTreeMap<String, DirectedIdealFamily>,
    pub file: ProblemFile,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl Problem {
    pub fn parse(text: &str, cfg: &ToleranceConfig) -> Result<Self> {
        Self::resolve(ProblemFile::parse(text)?, cfg)
    }

    /// Verifies the algebra, builds every subalgebra and family. Families are
    /// assembled but not verified (see `verify_directed_family`).
    pub fn resolve(file: ProblemFile, cfg: &ToleranceConfig) -> Result<Self> {
        if file.space_dim == 0 {
            return Err(Error::InvalidInput("space_dim must be positive".into()));
        }
        let mut named = Vec::with_capacity(file.basis.len());
        for b in &file.basis {
            let m = b.matrix.to_matrix()?;
            if m.rows() != file.space_dim || m.cols() != file.space_dim {
                return Err(Error::DimensionMismatch {
                    expected: file.space_dim,
                    found: if m.rows() != file.space_dim { m.rows() } else { m.cols() },
                });
            }
            named.push((b.name.clone(), m));
        }
        let algebra = Arc::new(verify_named_algebra(named, cfg)?);

        let mut subalgebras = BTreeMap::new();
        subalgebras.insert(WHOLE.to_string(), Subalgebra::whole(&algebra));
        for (label, vectors) in &file.subalgebras {
            if label == WHOLE {
                return Err(Error::InvalidInput(format!(
                    "label `{WHOLE}` is reserved for the whole algebra"
                )));
            }
            let coeffs = vectors
                .iter()
                .map(|v| CVector::from_iterator(v.len(), v.iter().map(|&z| Scalar::from(z))))
                .collect();
            let sub = Subalgebra::new(&algebra, coeffs, cfg).map_err(|e| {
                Error::InvalidInput(format!("subalgebra `{label}`: {e}"))
            })?;
            subalgebras.insert(label.clone(), sub);
        }

        let mut families = BTreeMap::new();
        for (label, fj) in &file.families {
            let members = fj
                .ideals
                .iter()
                .map(|l| {
                    subalgebras
                        .get(l)
                        .cloned()
                        .map(|s| (l.clone(), s))
                        .ok_or_else(|| Error::UnknownLabel(l.clone()))
                })
                .collect::<Result<Vec<_>>>()?;
            let order = fj
                .order
                .iter()
                .map(|[a, b]| (a.clone(), b.clone()))
                .collect();
            families.insert(
                label.clone(),
                DirectedIdealFamily::new(&algebra, members, order, cfg)?,
            );
        }
        Ok(Self {
            algebra,
            subalgebras,
            families,
            file,
        })
    }

    pub fn subalgebra(&self, label: &str) -> Result<&Subalgebra> {
        self.subalgebras
            .get(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn family(&self, label: &str) -> Result<&DirectedIdealFamily> {
        self.families
            .get(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

fn scalars_json(values: &[Scalar]) -> Value {
    Value::Array(values.iter().map(|z| json!([z.re, z.im])).collect())
}

/// `{"algebra": label, "values": [[re, im], …]}`.
pub fn character_json(algebra: &str, f: &Character) -> Value {
    json!({ "algebra": algebra, "values": scalars_json(f.values()) })
}

pub fn tolerances_json(cfg: &ToleranceConfig) -> Value {
    json!({ "rank_tol": cfg.rank_tol(), "value_tol": cfg.value_tol() })
}

fn kind_fields(obj: &mut Map<String, Value>, kind: crate::koszul::SpectrumKind) {
    obj.insert("kind".into(), json!(kind.name()));
    if let Some(k) = kind.level() {
        obj.insert("k".into(), json!(k));
    }
}

/// `{"algebra", "kind", "k"?, "points", "tolerances"}`.
pub fn spectrum_json(algebra: &str, result: &SpectrumResult) -> Value {
    let mut obj = Map::new();
    obj.insert("algebra".into(), json!(algebra));
    kind_fields(&mut obj, result.kind);
    obj.insert(
        "points".into(),
        Value::Array(result.points.iter().map(|f| character_json(algebra, f)).collect()),
    );
    obj.insert("tolerances".into(), tolerances_json(&result.tolerances));
    Value::Object(obj)
}

/// `{"presentation", "kind", "k"?, "tuples", "glued", "characterization",
/// "direct", "checks"}`.
pub fn limit_report_json(presentation: &str, report: &LimitReport, cfg: &ToleranceConfig) -> Value {
    let mut obj = Map::new();
    obj.insert("presentation".into(), json!(presentation));
    kind_fields(&mut obj, report.kind);
    let tuples = report
        .tuples
        .iter()
        .map(|t| {
            Value::Object(
                t.iter()
                    .map(|(label, f)| (label.clone(), character_json(label, f)))
                    .collect(),
            )
        })
        .collect();
    obj.insert("tuples".into(), Value::Array(tuples));
    let chars = |v: &[Character]| -> Value {
        Value::Array(v.iter().map(|f| character_json(WHOLE, f)).collect())
    };
    obj.insert("glued".into(), chars(&report.glued));
    obj.insert("characterization".into(), chars(&report.characterization));
    obj.insert("direct".into(), chars(&report.direct));
    obj.insert("checks".into(), serde_json::to_value(&report.checks).expect("plain struct"));
    obj.insert("tolerances".into(), tolerances_json(cfg));
    Value::Object(obj)
}

#[derive(Deserialize)]
struct PointJson {
    #[serde(with = "crate::numeric::scalar_list")]
    values: Vec<Scalar>,
}

#[derive(Deserialize)]
struct PointsJson {
    points: Vec<PointJson>,
}

/// Reads the points of a spectrum document (as written by [`spectrum_json`]).
pub fn parse_spectrum_points(text: &str) -> Result<Vec<Character>> {
    let doc: PointsJson = serde_json::from_str(text)?;
    Ok(doc
        .points
        .into_iter()
        .map(|p| Character::new(p.values))
        .collect())
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values always serialize");
    s.push('\n');
    s
}
