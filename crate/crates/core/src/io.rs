//! Plain-text matrix files and the JSON reports written by the CLI.
//!
//! Matrix format: the first non-comment line is `rows cols`, followed by
//! `rows` lines of `cols` whitespace-separated numbers (decimal or
//! scientific notation). Blank lines and lines starting with `#` are
//! skipped. Vectors are matrices with a single column (or a single row).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::decoder::DecodeResult;
use crate::error::{Error, Result};
use crate::numerics::{DenseMatrix, OrthonormalBasis};
use crate::projector::RobustProjector;
use crate::recovery::RecoverySet;

/// Version tag written to every JSON report.
pub const FORMAT_VERSION: u32 = 1;

pub fn read_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    parse_matrix(&fs::read_to_string(path)?, path)
}

/// Parses the text format; `origin` is only used in error messages.
pub fn parse_matrix(text: &str, origin: &Path) -> Result<DenseMatrix> {
    let parse_err = |line: usize, column: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        column,
        message,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });

    let (header_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "missing `rows cols` header".into()))?;
    let dims: Vec<(usize, &str)> = tokens(header).collect();
    if dims.len() != 2 {
        return Err(parse_err(
            header_no,
            1,
            format!("header must be `rows cols`, found {} fields", dims.len()),
        ));
    }
    let mut shape = [0usize; 2];
    for (slot, &(col, tok)) in shape.iter_mut().zip(&dims) {
        *slot = tok
            .parse()
            .map_err(|_| parse_err(header_no, col, format!("invalid dimension `{tok}`")))?;
    }
    let [rows, cols] = shape;

    let mut entries = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for (line_no, line) in lines {
        if seen == rows {
            return Err(parse_err(
                line_no,
                1,
                format!("expected {rows} rows, found more"),
            ));
        }
        let row: Vec<(usize, &str)> = tokens(line).collect();
        if row.len() != cols {
            return Err(Error::RaggedRow {
                path: origin.to_path_buf(),
                line: line_no,
                expected: cols,
                found: row.len(),
            });
        }
        for (col, tok) in row {
            let x: f64 = tok
                .parse()
                .map_err(|_| parse_err(line_no, col, format!("invalid number `{tok}`")))?;
            entries.push(x);
        }
        seen += 1;
    }
    if seen != rows {
        return Err(Error::DimensionMismatch {
            context: "row count",
            expected: rows,
            found: seen,
        });
    }
    DenseMatrix::new(rows, cols, entries)
}

/// Whitespace-separated tokens with their 1-based character column.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let start = rest.find(|c: char| !c.is_whitespace())?;
        let tail = &rest[start..];
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        let column = line[..offset + start].chars().count() + 1;
        let tok = &tail[..len];
        offset += start + len;
        rest = &tail[len..];
        Some((column, tok))
    })
}

/// Shortest round-tripping representation of every entry.
pub fn format_matrix(m: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format!("{:e}", m[(i, j)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn write_matrix(path: impl AsRef<Path>, m: &DenseMatrix) -> Result<()> {
    fs::write(path, format_matrix(m))?;
    Ok(())
}

/// Reads a single-column or single-row matrix file as a vector.
pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let m = read_matrix(path)?;
    match (m.rows(), m.cols()) {
        (_, 1) => Ok((0..m.rows()).map(|i| m[(i, 0)]).collect()),
        (1, _) => Ok(m.row(0)),
        (_, c) => Err(Error::DimensionMismatch {
            context: "vector file columns",
            expected: 1,
            found: c,
        }),
    }
}

/// Writes `v` as a column vector.
pub fn write_vector(path: impl AsRef<Path>, v: &[f64]) -> Result<()> {
    let m = DenseMatrix::new(v.len(), 1, v.to_vec())?;
    write_matrix(path, &m)
}

fn basis_rows(b: &OrthonormalBasis) -> Vec<Vec<f64>> {
    b.vectors()
}

/// JSON document for `projector` and `recover`. Matrices are row-major
/// nested arrays; basis vectors are listed one per inner array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectorReport {
    pub format: u32,
    pub m: usize,
    pub n: usize,
    pub q: usize,
    pub rank: usize,
    #[serde(rename = "U")]
    pub u: Vec<Vec<f64>>,
    pub image_basis: Vec<Vec<f64>>,
    pub kernel_basis: Vec<Vec<f64>>,
    pub anchor: Option<Vec<f64>>,
    pub projected_anchor: Option<Vec<f64>>,
}

impl ProjectorReport {
    pub fn from_projector(p: &RobustProjector) -> Self {
        ProjectorReport {
            format: FORMAT_VERSION,
            m: p.m(),
            n: p.n(),
            q: p.q(),
            rank: p.rank(),
            u: p.u().to_rows(),
            image_basis: basis_rows(p.image_basis()),
            kernel_basis: basis_rows(p.kernel_basis()),
            anchor: None,
            projected_anchor: None,
        }
    }

    pub fn from_recovery(p: &RobustProjector, set: &RecoverySet) -> Self {
        ProjectorReport {
            anchor: Some(set.anchor.clone()),
            projected_anchor: Some(set.projected_anchor.clone()),
            ..Self::from_projector(p)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeReport {
    pub format: u32,
    pub m: usize,
    pub n: usize,
    pub q: usize,
    pub x_hat: Vec<f64>,
    pub e_hat: Vec<f64>,
    pub support: Vec<usize>,
    pub support_size: usize,
    pub dropped_rows: Vec<usize>,
}

impl DecodeReport {
    pub fn new(m: usize, q: usize, r: &DecodeResult) -> Self {
        DecodeReport {
            format: FORMAT_VERSION,
            m,
            n: r.x_hat.len(),
            q,
            x_hat: r.x_hat.clone(),
            e_hat: r.e_hat.clone(),
            support: r.support.clone(),
            support_size: r.support_size,
            dropped_rows: r.dropped_rows.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub format: u32,
    pub robust: bool,
    /// Unit vector in `ker(U)` moved most by the map, when not robust.
    pub witness: Option<Vec<f64>>,
    pub witness_gain: Option<f64>,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}
