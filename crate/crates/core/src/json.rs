//! JSON documents for pencils, verdicts and reports.
//!
//! Every top-level document carries `"schema": 1`. Objects built from
//! [`serde_json::Value`] have sorted keys, so equal inputs give byte-identical
//! output.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::constants::{Coordinates, SquareWitnesses, Violation};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::FieldMatrix;
use crate::pencil::{Pencil, Realization};
use crate::ratio::RatMatrix;
use crate::realize::{Certificate, Transcript, TransferReport, Verdict};

pub const SCHEMA: u32 = 1;

fn schema_default() -> u32 {
    SCHEMA
}

/// On-disk form of a realization: `coeffs[j]` lists `A_j` row by row, `A0` first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilDoc {
    #[serde(default = "schema_default")]
    pub schema: u32,
    pub field: String,
    pub nvars: usize,
    pub size: usize,
    pub top: usize,
    pub coeffs: Vec<Vec<String>>,
}

impl PencilDoc {
    pub fn from_realization(r: &Realization) -> Self {
        let spec = r.spec();
        let coeffs = r
            .pencil()
            .coeffs()
            .iter()
            .map(|c| {
                (0..c.rows())
                    .flat_map(|i| (0..c.cols()).map(move |j| (i, j)))
                    .map(|(i, j)| spec.format_elem(c.get(i, j)))
                    .collect()
            })
            .collect();
        PencilDoc { schema: SCHEMA, field: spec.to_string(), nvars: r.nvars(), size: r.size(), top: r.top(), coeffs }
    }

    pub fn to_realization(&self) -> Result<Realization> {
        if self.schema != SCHEMA {
            return Err(Error::Format(format!("unsupported schema {}", self.schema)));
        }
        let spec: FieldSpec = self.field.parse()?;
        if self.coeffs.len() != self.nvars + 1 {
            return Err(Error::Format(format!(
                "{} coefficient matrices for {} variables",
                self.coeffs.len(),
                self.nvars
            )));
        }
        let m = self.size;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, flat)| {
                if flat.len() != m * m {
                    return Err(Error::Format(format!("A{j} has {} entries, expected {}", flat.len(), m * m)));
                }
                let data = flat.iter().map(|s| spec.parse_elem(s)).collect::<Result<Vec<_>>>()?;
                Ok(FieldMatrix::from_vec(spec, m, m, data))
            })
            .collect::<Result<Vec<_>>>()?;
        Realization::new(Pencil::new(spec, self.nvars, coeffs)?, self.top)
    }
}

pub fn realization_to_json(r: &Realization) -> String {
    serde_json::to_string_pretty(&PencilDoc::from_realization(r)).expect("plain data")
}

pub fn realization_from_json(s: &str) -> Result<Realization> {
    let doc: PencilDoc = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
    doc.to_realization()
}

/// Wraps an object in a schema-tagged document.
pub fn document(mut fields: Map<String, Value>) -> Value {
    fields.insert("schema".into(), json!(SCHEMA));
    Value::Object(fields)
}

pub fn matrix_json(m: &FieldMatrix) -> Value {
    let spec = m.spec();
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| json!(spec.format_elem(m.get(i, j)))).collect()))
            .collect(),
    )
}

pub fn rat_matrix_json(m: &RatMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| json!(m.get(i, j).to_string())).collect()))
            .collect(),
    )
}

pub fn coordinates_json(c: &Coordinates) -> Value {
    Value::Object(c.iter().map(|(beta, v)| (beta.bit_string(), json!(v.to_string()))).collect())
}

pub fn witnesses_json(w: &SquareWitnesses) -> Value {
    json!({
        "q0": w.q0.as_ref().map(|q| q.to_string()),
        "q": w.qs.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
    })
}

pub fn violation_json(v: &Violation) -> Value {
    match v {
        Violation::Coordinate { beta, value } => {
            json!({"kind": "coordinate", "beta": beta.bit_string(), "value": value.to_string()})
        }
        Violation::ConstantPart { value } => json!({"kind": "constant_part", "value": value.to_string()}),
        Violation::InhomogeneousWitness { var, value } => {
            json!({"kind": "inhomogeneous_witness", "var": var + 1, "value": value.to_string()})
        }
    }
}

/// Row and column indices are reported 1-based.
pub fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::Unconditional => json!({"kind": "unconditional"}),
        Certificate::Witnesses(ws) => json!({
            "kind": "witnesses",
            "diagonal": ws
                .iter()
                .map(|w| json!({"index": w.index + 1, "witnesses": witnesses_json(&w.witnesses)}))
                .collect::<Vec<_>>(),
        }),
        Certificate::Asymmetric { row, col } => json!({"kind": "asymmetric", "row": row + 1, "col": col + 1}),
        Certificate::NotHomogeneousDegreeOne { row, col } => {
            json!({"kind": "not_homogeneous_degree_one", "row": row + 1, "col": col + 1})
        }
        Certificate::OutsideSubspace { index, violation } => json!({
            "kind": "outside_subspace",
            "index": index + 1,
            "violation": violation_json(violation),
        }),
    }
}

pub fn transcript_json(t: &Transcript) -> Value {
    let f = t.field;
    json!({
        "field": f.to_string(),
        "points": t.points.iter().map(|p| json!({
            "point": p.point.iter().map(|&x| f.format_elem(x)).collect::<Vec<_>>(),
            "realized": matrix_json(&p.realized),
            "expected": matrix_json(&p.expected),
            "matches": p.matches,
        })).collect::<Vec<_>>(),
        "skipped": t.skipped,
        "passed": t.passed,
        "first_mismatch": t.first_mismatch,
        "exact": t.exact,
    })
}

pub fn verdict_json(v: &Verdict) -> Value {
    let realization = v
        .realization
        .as_ref()
        .map(|r| serde_json::to_value(PencilDoc::from_realization(r)).expect("plain data"));
    json!({
        "mode": v.mode.to_string(),
        "realizable": v.realizable,
        "certificate": certificate_json(&v.certificate),
        "realization": realization,
        "transcript": v.transcript.as_ref().map(transcript_json),
    })
}

pub fn transfer_json(t: &TransferReport) -> Value {
    json!({
        "verdict_base": verdict_json(&t.verdict_base),
        "verdict_ext": verdict_json(&t.verdict_ext),
        "agree": t.agree,
    })
}
