//! Shared text formats: matrices (header "n m", then rows of "re,im"
//! entries), subspace frames in the same format, and relation files carrying
//! a "RELATION" header above the resolvent matrix. Values are written with
//! the shortest decimal representation that round-trips exactly.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::cmat::CMatrix;
use crate::error::{Error, Result};
use crate::psd::{PsdOperator, Subspace};
use crate::relation::NonnegRelation;
use crate::tol::ToleranceContext;

pub const RELATION_HEADER: &str = "RELATION";

fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

fn fmt_entry(z: Complex64) -> String {
    format!("{},{}", fmt_f64(z.re), fmt_f64(z.im))
}

pub fn matrix_to_string(m: &CMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_entry(m[(i, j)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

fn parse_entry(token: &str) -> Result<Complex64> {
    let (re, im) = token
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("entry `{token}` is not re,im")))?;
    let re: f64 = re
        .parse()
        .map_err(|_| Error::Parse(format!("bad real part `{re}`")))?;
    let im: f64 = im
        .parse()
        .map_err(|_| Error::Parse(format!("bad imaginary part `{im}`")))?;
    Ok(Complex64::new(re, im))
}

pub fn matrix_from_str(text: &str) -> Result<CMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let mut dims = header.split_whitespace();
    let n: usize = dims
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad header `{header}`")))?;
    let m: usize = dims
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad header `{header}`")))?;
    let mut out = CMatrix::zeros(n, m);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing row {i}")))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != m {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {m}",
                tokens.len()
            )));
        }
        for (j, token) in tokens.iter().enumerate() {
            out[(i, j)] = parse_entry(token)?;
        }
    }
    Ok(out)
}

pub fn write_matrix(path: &Path, m: &CMatrix) -> Result<()> {
    std::fs::write(path, matrix_to_string(m))?;
    Ok(())
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)?;
    matrix_from_str(&text)
}

pub fn read_psd(path: &Path, ctx: ToleranceContext) -> Result<PsdOperator> {
    PsdOperator::new(read_matrix(path)?, ctx)
}

/// Subspace files store a spanning frame; the span is orthonormalized on read.
pub fn read_subspace(path: &Path, ctx: ToleranceContext) -> Result<Subspace> {
    Subspace::from_spanning(&read_matrix(path)?, ctx)
}

pub fn write_subspace(path: &Path, s: &Subspace) -> Result<()> {
    write_matrix(path, s.frame())
}

pub fn relation_to_string(rel: &NonnegRelation) -> String {
    format!("{RELATION_HEADER}\n{}", matrix_to_string(rel.resolvent().matrix()))
}

pub fn relation_from_str(text: &str, ctx: ToleranceContext) -> Result<NonnegRelation> {
    let rest = text
        .trim_start()
        .strip_prefix(RELATION_HEADER)
        .ok_or_else(|| Error::Parse("missing RELATION header".into()))?;
    let resolvent = PsdOperator::new_with_scale(matrix_from_str(rest)?, ctx, 1.0)?;
    NonnegRelation::from_resolvent(resolvent)
}

pub fn write_relation(path: &Path, rel: &NonnegRelation) -> Result<()> {
    std::fs::write(path, relation_to_string(rel))?;
    Ok(())
}

pub fn read_relation(path: &Path, ctx: ToleranceContext) -> Result<NonnegRelation> {
    let text = std::fs::read_to_string(path)?;
    relation_from_str(&text, ctx)
}

/// CSV with a header row, comma separators, and '.' decimal point.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            buf: format!("{}\n", header.join(",")),
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.buf, "{}", cells.join(","));
    }

    pub fn cell_f64(x: f64) -> String {
        fmt_f64(x)
    }

    pub fn cell_usize(x: usize) -> String {
        x.to_string()
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
