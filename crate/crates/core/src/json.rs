//! Versioned JSON formats. Every document carries `"format": "tw/1"` and a
//! `"type"` tag. Rationals are written as integers when integral and as
//! `"p/q"` strings otherwise; both forms are accepted on input.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{parse_q, BigradedTable, GradedRing, IndexConvention, Matrix, Q};
use crate::complex::{ComplexError, GradedComplex};
use crate::decomposition::Decomposition;
use crate::frontend::pd::{Crossing, LinkDiagram, PdError};
use crate::recovery::PageSequence;
use crate::spectral::{PageEntries, PageTable};

pub const FORMAT: &str = "tw/1";

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("expected \"format\": \"{FORMAT}\", found {0}")]
    Format(String),
    #[error("expected a {expected} document, found {found}")]
    Type { expected: &'static str, found: String },
    #[error("bad rational {0:?}")]
    Rational(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Pd(#[from] PdError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Rat {
    Int(i64),
    Text(String),
}

fn rat_out(x: &Q) -> Value {
    if x.is_integer() {
        if let Ok(n) = x.to_integer().to_string().parse::<i64>() {
            return json!(n);
        }
    }
    json!(x.to_string())
}

fn rat_in(r: &Rat) -> Result<Q, JsonError> {
    match r {
        Rat::Int(n) => Ok(Q::from_integer((*n).into())),
        Rat::Text(s) => parse_q(s).ok_or_else(|| JsonError::Rational(s.clone())),
    }
}

fn matrix_out(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|r| Value::Array(m.row(r).iter().map(rat_out).collect())).collect())
}

fn matrix_in(rows: &[Vec<Rat>], expected_cols: usize) -> Result<Matrix, JsonError> {
    let entries = rows
        .iter()
        .map(|row| {
            if row.len() != expected_cols {
                return Err(JsonError::Invalid(format!("matrix row has {} entries, expected {expected_cols}", row.len())));
            }
            row.iter().map(rat_in).collect()
        })
        .collect::<Result<Vec<Vec<Q>>, _>>()?;
    Ok(Matrix::from_rows(rows.len(), expected_cols, entries))
}

fn check_header(v: &Value, expected: &'static str) -> Result<(), JsonError> {
    match v.get("format") {
        Some(Value::String(f)) if f == FORMAT => {}
        other => return Err(JsonError::Format(other.map_or("nothing".into(), |f| f.to_string()))),
    }
    match v.get("type") {
        Some(Value::String(t)) if t == expected => Ok(()),
        other => Err(JsonError::Type { expected, found: other.map_or("nothing".into(), |t| t.to_string()) }),
    }
}

/// Pretty-printed with a trailing newline; key order is fixed, so output is
/// byte-for-byte reproducible.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap();
    s.push('\n');
    s
}

#[derive(Deserialize)]
struct ComplexDoc {
    k: i64,
    modules: BTreeMap<i64, Vec<i64>>,
    #[serde(default)]
    differentials: BTreeMap<i64, Vec<Vec<Rat>>>,
}

pub fn complex_to_json(c: &GradedComplex) -> Value {
    let modules: serde_json::Map<String, Value> =
        c.support().into_iter().map(|i| (i.to_string(), json!(c.degrees(i)))).collect();
    let diffs: serde_json::Map<String, Value> = c
        .chain()
        .differential_degrees()
        .into_iter()
        .map(|i| (i.to_string(), matrix_out(&c.differential(i))))
        .collect();
    json!({"format": FORMAT, "type": "complex", "k": c.k(), "modules": modules, "differentials": diffs})
}

pub fn complex_from_json(text: &str) -> Result<GradedComplex, JsonError> {
    let v: Value = serde_json::from_str(text)?;
    check_header(&v, "complex")?;
    let doc: ComplexDoc = serde_json::from_value(v)?;
    let ring = GradedRing::new(doc.k).map_err(|e| JsonError::Invalid(e.to_string()))?;
    let mut diffs = BTreeMap::new();
    for (i, rows) in &doc.differentials {
        let cols = doc.modules.get(i).map_or(0, Vec::len);
        diffs.insert(*i, matrix_in(rows, cols)?);
    }
    Ok(GradedComplex::new(ring, doc.modules, diffs)?)
}

#[derive(Deserialize)]
struct DecompositionDoc {
    k: i64,
    #[serde(default)]
    free: Vec<(i64, i64)>,
    #[serde(default)]
    torsion: Vec<(i64, u32, i64)>,
}

pub fn decomposition_to_json(d: &Decomposition) -> Value {
    let free: Vec<Value> = d.free().iter().map(|p| json!([p.i, p.s])).collect();
    let torsion: Vec<Value> = d.torsion().iter().map(|p| json!([p.i, p.m, p.s])).collect();
    json!({"format": FORMAT, "type": "decomposition", "k": d.k, "free": free, "torsion": torsion})
}

pub fn decomposition_from_json(text: &str) -> Result<Decomposition, JsonError> {
    let v: Value = serde_json::from_str(text)?;
    check_header(&v, "decomposition")?;
    let doc: DecompositionDoc = serde_json::from_value(v)?;
    if doc.k < 1 {
        return Err(JsonError::Invalid(format!("k must be positive, got {}", doc.k)));
    }
    if doc.torsion.iter().any(|t| t.1 == 0) {
        return Err(JsonError::Invalid("torsion exponent must be positive".into()));
    }
    Ok(Decomposition::from_tuples(doc.k, &doc.free, &doc.torsion))
}

fn convention_name(c: IndexConvention) -> &'static str {
    match c {
        IndexConvention::HomPoly => "hom_poly",
        IndexConvention::Page => "page",
    }
}

fn convention_from(name: &str) -> Result<IndexConvention, JsonError> {
    match name {
        "hom_poly" => Ok(IndexConvention::HomPoly),
        "page" => Ok(IndexConvention::Page),
        other => Err(JsonError::Invalid(format!("unknown convention {other:?}"))),
    }
}

pub fn table_to_json(t: &BigradedTable) -> Value {
    Value::Array(t.iter().map(|((a, b), d)| json!([a, b, d])).collect())
}

fn table_from(entries: &[(i64, i64, usize)], c: IndexConvention) -> BigradedTable {
    BigradedTable::from_entries(c, entries.iter().map(|&(a, b, d)| ((a, b), d)))
}

pub fn page_to_json(p: &PageTable) -> Value {
    match &p.entries {
        PageEntries::Field(t) => json!({
            "format": FORMAT, "type": "page", "r": p.r, "hat": true,
            "convention": convention_name(t.convention()), "entries": table_to_json(t),
        }),
        PageEntries::Module(m) => {
            let entries: Vec<Value> = m
                .iter()
                .map(|((a, b), d)| {
                    let torsion: Vec<Value> = d.torsions().iter().map(|(m, s)| json!([m, s])).collect();
                    json!({"position": [a, b], "free": d.free_shifts(), "torsion": torsion})
                })
                .collect();
            json!({"format": FORMAT, "type": "page", "r": p.r, "hat": false, "convention": "page", "entries": entries})
        }
    }
}

pub fn page_sequence_to_json(ps: &PageSequence) -> Value {
    let pages: Vec<Value> = ps.pages().iter().map(table_to_json).collect();
    json!({"format": FORMAT, "type": "page_sequence", "k": ps.k, "convention": "hom_poly", "pages": pages})
}

#[derive(Deserialize)]
struct PageSequenceDoc {
    k: i64,
    #[serde(default = "default_convention")]
    convention: String,
    /// `tilde` pages are `Ẽ^(1), Ẽ^(2), …`; `hat` pages are `Ê_1, Ê_2, …`.
    #[serde(default = "default_kind")]
    kind: String,
    pages: Vec<Vec<(i64, i64, usize)>>,
}

fn default_convention() -> String {
    "hom_poly".into()
}

fn default_kind() -> String {
    "tilde".into()
}

pub fn page_sequence_from_json(text: &str) -> Result<PageSequence, JsonError> {
    let v: Value = serde_json::from_str(text)?;
    check_header(&v, "page_sequence")?;
    let doc: PageSequenceDoc = serde_json::from_value(v)?;
    let conv = convention_from(&doc.convention)?;
    let tables: Vec<BigradedTable> = doc.pages.iter().map(|p| table_from(p, conv)).collect();
    match doc.kind.as_str() {
        "tilde" => Ok(PageSequence::new(doc.k, tables)),
        "hat" => {
            if doc.k < 1 {
                return Err(JsonError::Invalid(format!("k must be positive, got {}", doc.k)));
            }
            let tables: Vec<_> = tables.into_iter().map(|t| t.to_convention(IndexConvention::HomPoly)).collect();
            Ok(PageSequence::from_hat_pages(doc.k, &tables))
        }
        other => Err(JsonError::Invalid(format!("unknown page kind {other:?}"))),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CrossingDoc {
    Signed { arcs: [i64; 4], sign: i8 },
    Bare([i64; 4]),
}

#[derive(Deserialize)]
struct PdDoc {
    #[serde(default)]
    crossings: Option<Vec<CrossingDoc>>,
    #[serde(default)]
    free_loops: usize,
    #[serde(default)]
    braid: Option<String>,
    #[serde(default)]
    strands: Option<usize>,
}

/// A diagram given either by `"crossings"` (with or without signs) or by a
/// `"braid"` word.
pub fn pd_from_json(text: &str) -> Result<LinkDiagram, JsonError> {
    let v: Value = serde_json::from_str(text)?;
    check_header(&v, "pd")?;
    let doc: PdDoc = serde_json::from_value(v)?;
    match (doc.crossings, doc.braid) {
        (Some(_), Some(_)) => Err(JsonError::Invalid("give either crossings or a braid, not both".into())),
        (None, Some(word)) => Ok(LinkDiagram::parse_braid(&word, doc.strands)?),
        (None, None) => Ok(LinkDiagram::unlink(doc.free_loops)),
        (Some(cs), None) => {
            if cs.iter().all(|c| matches!(c, CrossingDoc::Signed { .. })) {
                let crossings = cs
                    .into_iter()
                    .map(|c| match c {
                        CrossingDoc::Signed { arcs, sign } => Crossing { arcs, sign },
                        CrossingDoc::Bare(_) => unreachable!(),
                    })
                    .collect();
                Ok(LinkDiagram::from_pd(crossings, doc.free_loops)?)
            } else if cs.iter().all(|c| matches!(c, CrossingDoc::Bare(_))) {
                let arcs = cs
                    .into_iter()
                    .map(|c| match c {
                        CrossingDoc::Bare(a) => a,
                        CrossingDoc::Signed { .. } => unreachable!(),
                    })
                    .collect();
                let d = LinkDiagram::from_unsigned_pd(arcs)?;
                Ok(LinkDiagram::from_pd(d.crossings().to_vec(), doc.free_loops)?)
            } else {
                Err(JsonError::Invalid("mix of signed and unsigned crossings".into()))
            }
        }
    }
}

pub fn pd_to_json(d: &LinkDiagram) -> Value {
    let crossings: Vec<Value> = d.crossings().iter().map(|c| json!({"arcs": c.arcs, "sign": c.sign})).collect();
    json!({"format": FORMAT, "type": "pd", "crossings": crossings, "free_loops": d.free_loops()})
}
