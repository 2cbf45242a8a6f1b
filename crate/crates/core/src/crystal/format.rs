//! The plain-text group file format:
//!
//! ```text
//! # Klein bottle
//! dim 2
//! gen
//! 1 0
//! 0 -1
//! vec 1/2 0
//! ```
//!
//! Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::group::CrystalGroup;
use super::CrystalError;
use crate::linalg::{IntegerMatrix, RationalVector};

const MAX_DIM: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

fn tokenize(src: &str) -> Vec<Line<'_>> {
    src.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push(Token { text: &body[s..pos], column: body[..s].chars().count() + 1 });
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some(Line { number: i + 1, tokens })
        })
        .collect()
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

fn parse_int(t: &Token<'_>, line: usize) -> Result<BigInt, ParseError> {
    t.text
        .parse::<BigInt>()
        .map_err(|_| err(line, t.column, format!("expected an integer, found `{}`", t.text)))
}

fn parse_rational(t: &Token<'_>, line: usize) -> Result<BigRational, ParseError> {
    let bad = || err(line, t.column, format!("expected a rational p/q, found `{}`", t.text));
    match t.text.split_once('/') {
        None => Ok(BigRational::from_integer(t.text.parse().map_err(|_| bad())?)),
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(err(line, t.column, "zero denominator"));
            }
            Ok(BigRational::new(p, q))
        }
    }
}

pub fn parse_group(src: &str) -> Result<CrystalGroup, ParseError> {
    let lines = tokenize(src);
    let mut it = lines.iter().peekable();
    let Some(first) = it.next() else {
        return Err(err(1, 1, "empty input: expected `dim n`"));
    };
    if first.tokens[0].text != "dim" || first.tokens.len() != 2 {
        return Err(err(first.number, first.tokens[0].column, "expected `dim n`"));
    }
    let dim_tok = &first.tokens[1];
    let dim: usize =
        dim_tok.text.parse().ok().filter(|&d| (1..=MAX_DIM).contains(&d)).ok_or_else(|| {
            err(first.number, dim_tok.column, format!("dimension must be in 1..={MAX_DIM}"))
        })?;

    let mut gens = Vec::new();
    let mut vecs: Vec<RationalVector> = Vec::new();
    while let Some(line) = it.next() {
        let head = &line.tokens[0];
        if head.text != "gen" || line.tokens.len() != 1 {
            return Err(err(line.number, head.column, format!("expected `gen`, found `{}`", head.text)));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for _ in 0..dim {
            let Some(row) = it.next() else {
                return Err(err(line.number, 1, "unexpected end of input inside `gen` block"));
            };
            if row.tokens.len() != dim {
                return Err(err(
                    row.number,
                    row.tokens[0].column,
                    format!("matrix row has {} entries, expected {dim}", row.tokens.len()),
                ));
            }
            for t in &row.tokens {
                entries.push(parse_int(t, row.number)?);
            }
        }
        let Some(vline) = it.next() else {
            return Err(err(line.number, 1, "missing `vec` line after matrix"));
        };
        let vhead = &vline.tokens[0];
        if vhead.text != "vec" {
            return Err(err(vline.number, vhead.column, format!("expected `vec`, found `{}`", vhead.text)));
        }
        if vline.tokens.len() != dim + 1 {
            return Err(err(
                vline.number,
                vhead.column,
                format!("vector has {} entries, expected {dim}", vline.tokens.len() - 1),
            ));
        }
        let v = vline.tokens[1..]
            .iter()
            .map(|t| parse_rational(t, vline.number))
            .collect::<Result<Vec<_>, _>>()?;
        gens.push(IntegerMatrix::from_vec(dim, dim, entries));
        vecs.push(v);
    }
    CrystalGroup::new(dim, gens, vecs).map_err(|e| match e {
        CrystalError::Shape(m) => err(1, 1, m),
        other => err(1, 1, other.to_string()),
    })
}

/// Serializes a group, optionally preceded by a `# name` comment.
pub fn write_group(group: &CrystalGroup, name: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        writeln!(out, "# {name}").unwrap();
    }
    writeln!(out, "dim {}", group.dim()).unwrap();
    for (a, v) in group.holonomy_gens().iter().zip(group.vectors()) {
        writeln!(out, "gen").unwrap();
        for row in a.row_vecs() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(out, "{}", cells.join(" ")).unwrap();
        }
        let cells: Vec<String> = v.iter().map(ToString::to_string).collect();
        writeln!(out, "vec {}", cells.join(" ")).unwrap();
    }
    out
}
