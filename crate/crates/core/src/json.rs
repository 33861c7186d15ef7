//! JSON encodings of fields, matrices, maps and preservation reports.
//! Scalars are always strings so that rationals and large residues survive
//! round-trips exactly.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CullisError, Result};
use crate::field::FieldSpec;
use crate::matrix::RectMatrix;
use crate::preserver::{LinearMapNK, MethodUsed, PreserverReport, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FieldJson {
    Gfp { p: u64 },
    Rational,
}

impl FieldJson {
    pub fn to_spec(self) -> Result<FieldSpec> {
        match self {
            FieldJson::Gfp { p } => FieldSpec::prime(p),
            FieldJson::Rational => Ok(FieldSpec::Rational),
        }
    }
}

impl From<FieldSpec> for FieldJson {
    fn from(f: FieldSpec) -> Self {
        match f {
            FieldSpec::Prime(p) => FieldJson::Gfp { p },
            FieldSpec::Rational => FieldJson::Rational,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub k: usize,
    pub field: FieldJson,
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapJson {
    pub n: usize,
    pub k: usize,
    pub field: FieldJson,
    pub mat: Vec<Vec<String>>,
}

fn string_rows(m: &RectMatrix) -> Vec<Vec<String>> {
    (0..m.nrows()).map(|r| m.row(r).iter().map(ToString::to_string).collect()).collect()
}

fn parse_rows(rows: &[Vec<String>], n: usize, k: usize, field: FieldSpec) -> Result<RectMatrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != k) {
        return Err(CullisError::ShapeMismatch(format!("entries do not form a {n}x{k} array")));
    }
    let entries = rows.iter().flatten().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()?;
    RectMatrix::new(n, k, field, entries)
}

pub fn matrix_to_json(m: &RectMatrix) -> Value {
    serde_json::to_value(MatrixJson {
        n: m.nrows(),
        k: m.ncols(),
        field: m.field().into(),
        entries: string_rows(m),
    })
    .expect("plain data serializes")
}

/// Parses a matrix; `field` overrides the declared field when given.
pub fn matrix_from_json(text: &str, field: Option<FieldSpec>) -> Result<RectMatrix> {
    let m: MatrixJson = serde_json::from_str(text).map_err(|e| CullisError::Parse(e.to_string()))?;
    let f = match field {
        Some(f) => f,
        None => m.field.to_spec()?,
    };
    parse_rows(&m.entries, m.n, m.k, f)
}

pub fn map_to_json(t: &LinearMapNK) -> Value {
    serde_json::to_value(MapJson { n: t.n(), k: t.k(), field: t.field().into(), mat: string_rows(t.mat()) })
        .expect("plain data serializes")
}

/// Parses a map; `field` reinterprets its entries when given.
pub fn map_from_json(text: &str, field: Option<FieldSpec>) -> Result<LinearMapNK> {
    let m: MapJson = serde_json::from_str(text).map_err(|e| CullisError::Parse(e.to_string()))?;
    let f = match field {
        Some(f) => f,
        None => m.field.to_spec()?,
    };
    let nk = m.n * m.k;
    LinearMapNK::new(m.n, m.k, parse_rows(&m.mat, nk, nk, f)?)
}

pub fn report_to_json(r: &PreserverReport) -> Value {
    let mut out = match &r.verdict {
        Verdict::Preserves => json!({"verdict": "preserves"}),
        Verdict::Inconclusive => json!({"verdict": "inconclusive"}),
        Verdict::Violates(x) => json!({"verdict": "violates", "witness": matrix_to_json(x)}),
    };
    match r.method {
        MethodUsed::Exhaustive => out["method"] = json!("exhaustive"),
        MethodUsed::Symbolic => out["method"] = json!("symbolic"),
        MethodUsed::Random { samples, seed } => {
            out["method"] = json!("random");
            out["samples"] = json!(samples);
            out["seed"] = json!(seed);
        }
    }
    out
}
