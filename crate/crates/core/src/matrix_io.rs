//! Plain-text matrix format.
//!
//! The first line holds the dimension `d`; each of the following `d` lines
//! holds one row of `d` entries written as `re,im` and separated by single
//! spaces. Blank lines after the last row are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};

fn parse_entry(tok: &str, line: usize) -> Result<num_complex::Complex64> {
    let (re, im) = tok
        .split_once(',')
        .ok_or_else(|| Error::Parse { line, msg: format!("entry `{tok}` is not of the form re,im") })?;
    let parse = |s: &str| {
        s.trim().parse::<f64>().map_err(|e| Error::Parse { line, msg: format!("`{s}`: {e}") })
    };
    let z = c(parse(re)?, parse(im)?);
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Parse { line, msg: format!("non-finite entry `{tok}`") });
    }
    Ok(z)
}

pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    let (_, head) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let d: usize = head
        .trim()
        .parse()
        .map_err(|_| Error::Parse { line: 1, msg: format!("expected a dimension, found `{head}`") })?;
    if d == 0 {
        return Err(Error::Parse { line: 1, msg: "dimension must be positive".into() });
    }
    let mut m = CMatrix::zeros(d, d);
    for r in 0..d {
        let (no, row) = lines
            .next()
            .ok_or(Error::Parse { line: r + 2, msg: format!("expected {d} rows, found {r}") })?;
        let toks: Vec<&str> = row.split(' ').collect();
        if toks.len() != d {
            return Err(Error::Parse { line: no, msg: format!("expected {d} entries, found {}", toks.len()) });
        }
        for (col, tok) in toks.iter().enumerate() {
            m[(r, col)] = parse_entry(tok, no)?;
        }
    }
    if let Some((no, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::Parse { line: no, msg: "unexpected trailing content".into() });
    }
    Ok(m)
}

/// Shortest decimal that round-trips through `f64` parsing.
pub fn format_matrix(m: &CMatrix) -> String {
    let d = m.nrows();
    let mut out = format!("{d}\n");
    for r in 0..d {
        for col in 0..m.ncols() {
            if col > 0 {
                out.push(' ');
            }
            let z = m[(r, col)];
            let _ = write!(out, "{:?},{:?}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}
