//! JSON and plain-text documents for matrices, lines and segments.
//!
//! Every scalar is written as a string: integers plainly, other rationals as
//! `num/den`. Inputs may use JSON numbers or strings, including decimals,
//! which are read exactly.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use troplin::maxplus::{Piece, TropicalSegment};
use troplin::tree::{Edge, InnerVertex, Mark, MetricTree, Split};
use troplin::{Matrix, ProjectivePoint, Scalar, VerificationReport};

use crate::error::CliError;
use crate::newick;

fn scalar_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_string).collect()
}

fn parse_scalar(text: &str) -> Result<Scalar, CliError> {
    text.trim().parse::<Scalar>().map_err(|_| CliError::parse("number", format!("{text:?} is not an exact number")))
}

fn parse_scalars(v: &[String]) -> Result<Vec<Scalar>, CliError> {
    v.iter().map(|x| parse_scalar(x)).collect()
}

fn parse_point(v: &[String]) -> Result<ProjectivePoint, CliError> {
    Ok(ProjectivePoint::canonicalize(&parse_scalars(v)?)?)
}

fn value_scalar(v: &Value) -> Result<Scalar, CliError> {
    match v {
        Value::Number(x) => parse_scalar(&x.to_string()),
        Value::String(x) => parse_scalar(x),
        other => Err(CliError::parse("matrix entry", format!("{other} is not a number"))),
    }
}

/// A matrix as written by the tool: `n` rows, row-major entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub n: usize,
    pub entries: Vec<Vec<String>>,
}

impl MatrixDocument {
    pub fn from_matrix(m: &Matrix) -> MatrixDocument {
        MatrixDocument { n: m.rows(), entries: m.to_rows().iter().map(|r| scalar_strings(r)).collect() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

/// Reads a matrix from JSON (`{"n": .., "entries": ..}` with nested or flat
/// entries, or a bare nested array) or from whitespace-separated text with
/// one row per line. Blank lines and `#` comments are skipped.
pub fn parse_matrix(text: &str) -> Result<Matrix, CliError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        parse_matrix_json(trimmed)
    } else {
        parse_matrix_text(text)
    }
}

fn parse_matrix_json(text: &str) -> Result<Matrix, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::parse("matrix JSON", e))?;
    let (n, entries) = match &value {
        Value::Object(obj) => {
            let entries = obj.get("entries").ok_or_else(|| CliError::parse("matrix JSON", "missing \"entries\""))?;
            let n = match obj.get("n") {
                Some(Value::Number(x)) => Some(
                    x.to_string().parse::<usize>().map_err(|_| CliError::parse("matrix JSON", "\"n\" must be a count"))?,
                ),
                Some(_) => return Err(CliError::parse("matrix JSON", "\"n\" must be a count")),
                None => None,
            };
            (n, entries)
        }
        array => (None, array),
    };
    let items = entries.as_array().ok_or_else(|| CliError::parse("matrix JSON", "\"entries\" must be an array"))?;
    let rows: Vec<Vec<Scalar>> = if items.iter().all(Value::is_array) {
        items
            .iter()
            .map(|row| row.as_array().expect("checked").iter().map(value_scalar).collect())
            .collect::<Result<_, _>>()?
    } else {
        let n = n.ok_or_else(|| CliError::parse("matrix JSON", "flat entries need \"n\""))?;
        let flat: Vec<Scalar> = items.iter().map(value_scalar).collect::<Result<_, _>>()?;
        if n == 0 || !flat.len().is_multiple_of(n) {
            return Err(CliError::parse("matrix JSON", format!("{} entries do not fill {n} rows", flat.len())));
        }
        flat.chunks(flat.len() / n).map(<[Scalar]>::to_vec).collect()
    };
    if let Some(n) = n {
        if rows.len() != n {
            return Err(CliError::parse("matrix JSON", format!("\"n\" is {n} but there are {} rows", rows.len())));
        }
    }
    finish_rows(rows)
}

fn parse_matrix_text(text: &str) -> Result<Matrix, CliError> {
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        rows.push(line.split_whitespace().map(parse_scalar).collect::<Result<Vec<_>, _>>()?);
    }
    finish_rows(rows)
}

fn finish_rows(rows: Vec<Vec<Scalar>>) -> Result<Matrix, CliError> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(CliError::parse("matrix", "no entries"));
    }
    Matrix::from_rows(rows).map_err(|e| CliError::parse("matrix", e))
}

/// One spine vertex: coordinate, distance from `p`, attached rays (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDocument {
    pub coord: Vec<String>,
    pub offset: String,
    pub rays: Vec<usize>,
}

/// A marked point: the ray it lies on (1-based) and its distance from the
/// nearest vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkDocument {
    pub ray: usize,
    pub offset: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarksDocument {
    pub p: MarkDocument,
    pub q: MarkDocument,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckDocument {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub overall: bool,
    pub checks: Vec<CheckDocument>,
}

impl ReportDocument {
    pub fn from_report(r: &VerificationReport) -> ReportDocument {
        ReportDocument {
            overall: r.overall,
            checks: r
                .checks
                .iter()
                .map(|c| CheckDocument { name: c.name.to_string(), passed: c.passed, witness: c.witness.clone() })
                .collect(),
        }
    }
}

/// The line `L(p, q)` as written by `line --format json`. Labels and column
/// numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDocument {
    pub n: usize,
    pub cols: [usize; 2],
    pub p: Vec<String>,
    pub q: Vec<String>,
    pub total: String,
    pub spine: Vec<VertexDocument>,
    pub edges: Vec<String>,
    pub bipartitions: Vec<[Vec<usize>; 2]>,
    pub marks: MarksDocument,
    pub newick: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verification: Option<ReportDocument>,
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn zero_based(v: &[usize], n: usize) -> Result<Vec<usize>, CliError> {
    v.iter()
        .map(|&x| {
            if x == 0 || x > n {
                Err(CliError::parse("tree", format!("label {x} outside 1..{n}")))
            } else {
                Ok(x - 1)
            }
        })
        .collect()
}

impl TreeDocument {
    pub fn from_tree(t: &MetricTree) -> TreeDocument {
        TreeDocument {
            n: t.n,
            cols: [t.cols.0 + 1, t.cols.1 + 1],
            p: scalar_strings(t.p.coords()),
            q: scalar_strings(t.q.coords()),
            total: t.total_length().to_string(),
            spine: t
                .vertices
                .iter()
                .map(|v| VertexDocument {
                    coord: scalar_strings(v.coord.coords()),
                    offset: v.offset.to_string(),
                    rays: one_based(&v.leaves),
                })
                .collect(),
            edges: t.edges.iter().map(|e| e.length.to_string()).collect(),
            bipartitions: t.splits.iter().map(|s| [one_based(s.side()), one_based(s.other())]).collect(),
            marks: MarksDocument {
                p: MarkDocument { ray: t.p_mark.leaf + 1, offset: t.p_mark.offset.to_string() },
                q: MarkDocument { ray: t.q_mark.leaf + 1, offset: t.q_mark.offset.to_string() },
            },
            newick: newick::write(t),
            verification: None,
        }
    }

    /// Rebuilds the tree; the inverse of [`TreeDocument::from_tree`].
    pub fn to_tree(&self) -> Result<MetricTree, CliError> {
        let n = self.n;
        if self.spine.is_empty() {
            return Err(CliError::parse("tree", "empty spine"));
        }
        if self.edges.len() + 1 != self.spine.len() || self.bipartitions.len() != self.edges.len() {
            return Err(CliError::parse("tree", "spine, edges and bipartitions do not match up"));
        }
        let vertices = self
            .spine
            .iter()
            .map(|v| {
                Ok(InnerVertex { coord: parse_point(&v.coord)?, leaves: zero_based(&v.rays, n)?, offset: parse_scalar(&v.offset)? })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(k, len)| Ok(Edge { from: k, to: k + 1, length: parse_scalar(len)? }))
            .collect::<Result<Vec<_>, CliError>>()?;
        let splits = self
            .bipartitions
            .iter()
            .map(|[a, b]| {
                let (a, b) = (zero_based(a, n)?, zero_based(b, n)?);
                Ok(Split::new(a.iter().chain(&b).copied(), &a))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let [i, j] = self.cols;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(CliError::parse("tree", "column out of range"));
        }
        let mark = |m: &MarkDocument, vertex: usize| -> Result<Mark, CliError> {
            Ok(Mark { leaf: zero_based(&[m.ray], n)?[0], vertex, offset: parse_scalar(&m.offset)? })
        };
        Ok(MetricTree {
            n,
            cols: (i - 1, j - 1),
            p: parse_point(&self.p)?,
            q: parse_point(&self.q)?,
            p_mark: mark(&self.marks.p, 0)?,
            q_mark: mark(&self.marks.q, vertices.len() - 1)?,
            vertices,
            edges,
            splits,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<TreeDocument, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::parse("tree JSON", e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceDocument {
    pub slope: Vec<usize>,
    pub length: String,
}

/// A tropical segment: breakpoints in order and the pieces between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentDocument {
    pub cols: [usize; 2],
    pub total: String,
    pub breakpoints: Vec<Vec<String>>,
    pub pieces: Vec<PieceDocument>,
}

impl SegmentDocument {
    pub fn from_segment(cols: (usize, usize), seg: &TropicalSegment) -> SegmentDocument {
        SegmentDocument {
            cols: [cols.0 + 1, cols.1 + 1],
            total: troplin::maxplus::integer_length(seg).to_string(),
            breakpoints: seg.breakpoints.iter().map(|b| scalar_strings(b.coords())).collect(),
            pieces: seg
                .pieces
                .iter()
                .map(|Piece { slope, length }| PieceDocument { slope: one_based(slope), length: length.to_string() })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}
