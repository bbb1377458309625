//! The plain-text relation file format.
//!
//! ```text
//! # identity on GF(2)^2
//! field gf 2
//! dims 2 2
//! gen 1 0 1 0
//! gen 0 1 0 1
//! ```
//!
//! `#` starts a comment, blank lines are ignored, scalars are integers or
//! `a/b`. The header lines come first in the order shown. Serialization
//! writes the canonical RREF basis, so `serialize(parse(t))` is a normal form.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::relation::LinearRelation;

/// Whitespace-separated words with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, byte)),
            (true, Some((c, b))) => {
                out.push((c, &line[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &line[b..]));
    }
    out
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_usize(line: usize, (col, word): (usize, &str)) -> Result<usize> {
    word.parse()
        .map_err(|_| parse_err(line, col, format!("expected a dimension, found {word:?}")))
}

fn parse_field(line: usize, words: &[(usize, &str)]) -> Result<FieldSpec> {
    match words {
        [_, (_, "q")] => Ok(FieldSpec::Rational),
        [_, (_, "gf"), (col, p)] => {
            let p: u64 = p
                .parse()
                .map_err(|_| parse_err(line, *col, format!("expected a prime, found {p:?}")))?;
            FieldSpec::prime(p)
        }
        _ => Err(parse_err(line, 1, "expected `field gf <p>` or `field q`")),
    }
}

/// Parses a relation file. The graph is canonicalized, so generator order
/// and redundancy do not matter.
pub fn parse_relation(text: &str) -> Result<LinearRelation> {
    let mut field = None;
    let mut dims = None;
    let mut gens = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let content = raw.split('#').next().unwrap_or("");
        let words = tokens(content);
        let Some(&(col, keyword)) = words.first() else {
            continue;
        };
        match (keyword, field, dims) {
            ("field", None, _) => field = Some(parse_field(lineno, &words)?),
            ("dims", Some(_), None) => {
                if words.len() != 3 {
                    return Err(parse_err(
                        lineno,
                        col,
                        "expected `dims <dom_dim> <cod_dim>`",
                    ));
                }
                dims = Some((
                    parse_usize(lineno, words[1])?,
                    parse_usize(lineno, words[2])?,
                ));
            }
            ("gen", Some(f), Some((n, m))) => {
                let entries = &words[1..];
                if entries.len() != n + m {
                    return Err(parse_err(
                        lineno,
                        col,
                        format!(
                            "generator row has {} entries, expected {}",
                            entries.len(),
                            n + m
                        ),
                    ));
                }
                let row = entries
                    .iter()
                    .map(|&(c, w)| {
                        f.parse_scalar(w)
                            .map_err(|e| parse_err(lineno, c, e.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                gens.push(row);
            }
            ("field", Some(_), _) => return Err(parse_err(lineno, col, "duplicate `field` line")),
            ("dims", None, _) => return Err(parse_err(lineno, col, "`dims` before `field`")),
            ("dims", Some(_), Some(_)) => {
                return Err(parse_err(lineno, col, "duplicate `dims` line"))
            }
            ("gen", None, _) | ("gen", _, None) => {
                return Err(parse_err(
                    lineno,
                    col,
                    "`gen` before the `field` and `dims` lines",
                ))
            }
            (other, _, _) => {
                return Err(parse_err(lineno, col, format!("unknown keyword {other:?}")))
            }
        }
    }
    let (Some(f), Some((n, m))) = (field, dims) else {
        let what = if field.is_none() { "`field`" } else { "`dims`" };
        return Err(parse_err(
            last_line.max(1),
            1,
            format!("missing {what} line"),
        ));
    };
    LinearRelation::from_generators(f, n, m, gens)
}

/// Writes `r` in canonical form, one `gen` line per RREF basis row.
pub fn serialize_relation(r: &LinearRelation) -> String {
    let mut out = String::new();
    match r.field() {
        FieldSpec::Prime(p) => writeln!(out, "field gf {p}").unwrap(),
        FieldSpec::Rational => writeln!(out, "field q").unwrap(),
    }
    writeln!(out, "dims {} {}", r.dom_dim(), r.cod_dim()).unwrap();
    for row in r.graph().basis() {
        out.push_str("gen");
        for s in row {
            write!(out, " {s}").unwrap();
        }
        out.push('\n');
    }
    out
}
