//! The JSON document format: optional `space`, `relation` and `triple`
//! sections, complex scalars as `[re, im]`, matrices as row-major nested
//! arrays, and relation/`T^+` bases as lists of graph vectors `(f, g)`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use kreinrel::linalg::{c, CMat, C64};
use kreinrel::{BoundaryTriple, KreinSpace, Relation, Subspace};

pub type Cx = [f64; 2];

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<RelationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<TripleDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub dim: usize,
    #[serde(rename = "J")]
    pub j: Vec<Vec<Cx>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    /// Number of basis vectors, each of length `2 dim`.
    pub dim: usize,
    pub basis: Vec<Vec<Cx>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleDoc {
    pub boundary_dim: usize,
    /// `2 boundary_dim × dim T^+`, in coordinates of `tplus`.
    pub gamma: Vec<Vec<Cx>>,
    pub tplus: Vec<Vec<Cx>>,
}

#[derive(Debug)]
pub enum IoError {
    Read { path: String, message: String },
    Parse { path: String, line: usize, column: usize, message: String },
    Content { path: String, message: String },
}

impl std::fmt::Display for IoError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IoError::Read { path, message } => write!(f, "{path}: {message}"),
            IoError::Parse { path, line, column, message } => write!(f, "{path}:{line}:{column}: {message}"),
            IoError::Content { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

impl std::error::Error for IoError {}

pub fn parse(path: &str, text: &str) -> Result<Document, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn read(path: impl AsRef<Path>) -> Result<Document, IoError> {
    let p = path.as_ref().display().to_string();
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| IoError::Read { path: p.clone(), message: e.to_string() })?;
    parse(&p, &text)
}

/// The objects a document describes, each built on the previous one.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub space: KreinSpace,
    pub relation: Option<Relation>,
    pub triple: Option<BoundaryTriple>,
}

impl Loaded {
    pub fn relation(&self, path: &str) -> Result<&Relation, IoError> {
        self.relation.as_ref().ok_or_else(|| content(path, "missing `relation` section"))
    }

    pub fn triple(&self, path: &str) -> Result<&BoundaryTriple, IoError> {
        self.triple.as_ref().ok_or_else(|| content(path, "missing `triple` section"))
    }
}

fn content(path: &str, message: impl Into<String>) -> IoError {
    IoError::Content { path: path.to_string(), message: message.into() }
}

pub fn load(path: &str) -> Result<Loaded, IoError> {
    let doc = read(path)?;
    interpret(path, &doc)
}

pub fn interpret(path: &str, doc: &Document) -> Result<Loaded, IoError> {
    let sd = doc.space.as_ref().ok_or_else(|| content(path, "missing `space` section"))?;
    let j = matrix(path, "space.J", &sd.j, sd.dim, sd.dim)?;
    let space = KreinSpace::new(j).map_err(|e| content(path, format!("space.J: {e}")))?;
    let relation = match &doc.relation {
        None => None,
        Some(rd) => {
            let basis = columns(path, "relation.basis", &rd.basis, rd.dim, 2 * sd.dim)?;
            let graph = Subspace::span(&basis).map_err(|e| content(path, format!("relation.basis: {e}")))?;
            Some(Relation::in_space(&space, graph).map_err(|e| content(path, format!("relation: {e}")))?)
        }
    };
    let triple = match triple_inputs(path, doc)? {
        None => None,
        Some((gamma, basis)) => {
            let t = relation.as_ref().ok_or_else(|| content(path, "a `triple` needs a `relation` section"))?;
            let tr = BoundaryTriple::validate(t, &gamma, &basis)
                .map_err(|e| content(path, format!("triple: {e}")))?;
            Some(tr)
        }
    };
    Ok(Loaded { space, relation, triple })
}

/// Shape-checked `(Γ, T^+ basis)` of the `triple` section, before any
/// mathematical validation.
pub fn triple_inputs(path: &str, doc: &Document) -> Result<Option<(CMat, CMat)>, IoError> {
    let (Some(sd), Some(td)) = (&doc.space, &doc.triple) else {
        return Ok(None);
    };
    let k = td.tplus.len();
    let basis = columns(path, "triple.tplus", &td.tplus, k, 2 * sd.dim)?;
    let gamma = matrix(path, "triple.gamma", &td.gamma, 2 * td.boundary_dim, k)?;
    Ok(Some((gamma, basis)))
}

fn to_c64(x: &Cx) -> C64 {
    c(x[0], x[1])
}

fn matrix(path: &str, field: &str, rows: &[Vec<Cx>], nrows: usize, ncols: usize) -> Result<CMat, IoError> {
    if rows.len() != nrows {
        return Err(content(path, format!("{field}: expected {nrows} rows, found {}", rows.len())));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != ncols) {
        return Err(content(path, format!("{field}: row {i} has {} entries, expected {ncols}", r.len())));
    }
    Ok(CMat::from_fn(nrows, ncols, |i, j| to_c64(&rows[i][j])))
}

/// Vectors given one per entry, assembled as matrix columns.
fn columns(path: &str, field: &str, vectors: &[Vec<Cx>], count: usize, len: usize) -> Result<CMat, IoError> {
    Ok(matrix(path, field, vectors, count, len)?.transpose())
}

pub fn matrix_doc(m: &CMat) -> Vec<Vec<Cx>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

fn columns_doc(m: &CMat) -> Vec<Vec<Cx>> {
    matrix_doc(&m.transpose())
}

pub fn space_doc(space: &KreinSpace) -> SpaceDoc {
    SpaceDoc { dim: space.dim(), j: matrix_doc(space.j()) }
}

pub fn relation_doc(r: &Relation) -> RelationDoc {
    RelationDoc { dim: r.dim(), basis: columns_doc(r.graph().frame()) }
}

pub fn triple_doc(tr: &BoundaryTriple) -> TripleDoc {
    TripleDoc { boundary_dim: tr.boundary_dim(), gamma: matrix_doc(tr.gamma()), tplus: columns_doc(tr.frame()) }
}

pub fn relation_document(r: &Relation) -> Document {
    Document { space: Some(space_doc(r.src())), relation: Some(relation_doc(r)), triple: None }
}

pub fn triple_document(tr: &BoundaryTriple) -> Document {
    Document { space: Some(space_doc(tr.space())), relation: Some(relation_doc(tr.t())), triple: Some(triple_doc(tr)) }
}

/// Two-space JSON with arrays of scalars (and arrays of such arrays, i.e.
/// matrix rows) kept on one line.
pub fn render<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_array() && !x.is_object()),
        _ => !v.is_object(),
    }
}

fn inline(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(is_flat),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent + 1);
    let close = "  ".repeat(indent);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, val)) in map.iter().enumerate() {
                let _ = write!(out, "{pad}{}: ", Value::String(key.clone()));
                write_value(out, val, indent + 1);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{close}}}");
        }
        Value::Array(items) if !items.is_empty() && !inline(v) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad);
                write_value(out, item, indent + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{close}]");
        }
        _ => out.push_str(&compact(v)),
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(compact).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}
