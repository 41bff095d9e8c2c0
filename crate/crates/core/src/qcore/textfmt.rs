//! Plain-text matrix format.
//!
//! ```text
//! # optional comment lines
//! operator 2 2
//! 1e0,0e0 0e0,0e0 0e0,0e0 0e0,0e0
//! ...
//! ```
//!
//! The header names the kind (`operator` or `state`) followed by the factor
//! dimensions. Operators have one line per row; a state is a single line.
//! Entries are `re,im` pairs written with the shortest round-trip
//! representation, so write-then-read is exact.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::operator::Operator;
use super::space::CompositeSpace;
use super::state::StateVector;
use crate::error::{Error, Result};

/// Either kind of object the format can hold.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixText {
    Operator(Operator),
    State(StateVector),
}

fn header(kind: &str, space: &CompositeSpace) -> String {
    let dims: Vec<String> = space.dims().iter().map(|d| d.to_string()).collect();
    format!("{kind} {}\n", dims.join(" "))
}

fn push_entry(out: &mut String, z: C64) {
    write!(out, "{:e},{:e}", z.re, z.im).expect("writing to a String");
}

fn push_row(out: &mut String, entries: impl Iterator<Item = C64>) {
    for (k, z) in entries.enumerate() {
        if k > 0 {
            out.push(' ');
        }
        push_entry(out, z);
    }
    out.push('\n');
}

pub fn write_operator(op: &Operator) -> String {
    let mut out = header("operator", op.space());
    let m = op.matrix();
    for i in 0..m.nrows() {
        push_row(&mut out, (0..m.ncols()).map(|j| m[(i, j)]));
    }
    out
}

pub fn write_state(psi: &StateVector) -> String {
    let mut out = header("state", psi.space());
    push_row(&mut out, psi.amplitudes().iter().copied());
    out
}

fn parse_entry(tok: &str, line: usize) -> Result<C64> {
    let parse_err = |message: String| Error::Parse { line, message };
    let (re, im) = tok
        .split_once(',')
        .ok_or_else(|| parse_err(format!("expected re,im but found {tok:?}")))?;
    let re: f64 = re.trim().parse().map_err(|e| parse_err(format!("real part {re:?}: {e}")))?;
    let im: f64 = im.trim().parse().map_err(|e| parse_err(format!("imaginary part {im:?}: {e}")))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(parse_err(format!("non-finite entry {tok:?}")));
    }
    Ok(C64::new(re, im))
}

pub fn read(text: &str) -> Result<MatrixText> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, head) = lines.next().ok_or(Error::Parse { line: 0, message: "empty input".into() })?;
    let mut words = head.split_whitespace();
    let kind = words.next().unwrap_or_default();
    let dims = words
        .map(|w| {
            w.parse::<usize>()
                .map_err(|e| Error::Parse { line: hline, message: format!("dimension {w:?}: {e}") })
        })
        .collect::<Result<Vec<_>>>()?;
    let space = CompositeSpace::new(dims).map_err(|e| Error::Parse { line: hline, message: e.to_string() })?;
    let n = space.total();

    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (ln, l) in lines {
        let row = l.split_whitespace().map(|t| parse_entry(t, ln)).collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(Error::Parse { line: ln, message: format!("expected {n} entries, found {}", row.len()) });
        }
        rows.push(row);
    }

    match kind {
        "operator" => {
            if rows.len() != n {
                return Err(Error::Parse { line: hline, message: format!("expected {n} rows, found {}", rows.len()) });
            }
            let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
            Ok(MatrixText::Operator(Operator::new(m, space)?))
        }
        "state" => {
            if rows.len() != 1 {
                return Err(Error::Parse { line: hline, message: format!("a state has one row, found {}", rows.len()) });
            }
            let amps = rows.pop().expect("one row");
            Ok(MatrixText::State(StateVector::new(amps, space)?))
        }
        other => Err(Error::Parse { line: hline, message: format!("unknown kind {other:?}, expected operator or state") }),
    }
}

pub fn read_operator(text: &str) -> Result<Operator> {
    match read(text)? {
        MatrixText::Operator(op) => Ok(op),
        MatrixText::State(_) => Err(Error::Parse { line: 0, message: "expected an operator, found a state".into() }),
    }
}

pub fn read_state(text: &str) -> Result<StateVector> {
    match read(text)? {
        MatrixText::State(s) => Ok(s),
        MatrixText::Operator(_) => Err(Error::Parse { line: 0, message: "expected a state, found an operator".into() }),
    }
}
