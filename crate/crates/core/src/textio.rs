//! Plain-text format for forms:
//!
//! ```text
//! # comments and blank lines are ignored
//! field q=3
//! dim m=7
//! grade 3
//! 1 2 3 : 1
//! 4 5 6 : 2
//! ```
//!
//! Each term line lists strictly increasing 1-based indices, a colon and the
//! coefficient as a field element index.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::extalg::{AltForm, MultiIndex};
use crate::gf::Field;

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, key: &str, last: usize) -> Result<(usize, u32)> {
    let (n, text) = lines.next().ok_or_else(|| err(last + 1, format!("missing `{key}` header")))?;
    let value = text
        .strip_prefix(key)
        .map(str::trim)
        .ok_or_else(|| err(n, format!("expected `{key}<value>`, found `{text}`")))?;
    let v = value.parse::<u32>().map_err(|_| err(n, format!("invalid number `{value}`")))?;
    Ok((n, v))
}

/// Parses a form from text.
pub fn parse_form(text: &str) -> Result<AltForm> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (n, q) = header(&mut lines, "field q=", 0)?;
    let field = Field::new(q).map_err(|e| err(n, e.to_string()))?;
    let (n, m) = header(&mut lines, "dim m=", n)?;
    let m = m as usize;
    if m == 0 || m > crate::extalg::MAX_DIM {
        return Err(err(n, format!("dimension {m} out of range 1..={}", crate::extalg::MAX_DIM)));
    }
    let (n, grade) = header(&mut lines, "grade ", n)?;
    let grade = grade as usize;
    if grade > m {
        return Err(err(n, format!("grade {grade} exceeds dimension {m}")));
    }
    let mut seen = BTreeSet::new();
    let mut terms = Vec::new();
    for (n, line) in lines {
        let (lhs, rhs) = line.split_once(':').ok_or_else(|| err(n, "expected `<indices> : <coefficient>`"))?;
        let idx: Vec<usize> = lhs
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| err(n, format!("invalid index `{t}`"))))
            .collect::<Result<_>>()?;
        if idx.len() != grade {
            return Err(err(n, format!("expected {grade} indices, found {}", idx.len())));
        }
        if idx.iter().any(|&i| i == 0 || i > m) {
            return Err(err(n, format!("indices must lie in 1..={m}")));
        }
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(err(n, "indices must be strictly increasing"));
        }
        let c = rhs.trim();
        let c = c.parse::<u32>().map_err(|_| err(n, format!("invalid coefficient `{c}`")))?;
        let c = field.element(c).map_err(|e| err(n, e.to_string()))?;
        let mi = MultiIndex::new(&idx).map_err(|e| err(n, e.to_string()))?;
        if !seen.insert(mi) {
            return Err(err(n, "duplicate index tuple"));
        }
        terms.push((mi, c));
    }
    AltForm::from_terms(field, m, grade, terms)
}

/// Writes a form in the text format; terms appear in canonical order.
pub fn write_form(form: &AltForm) -> String {
    let mut out = String::new();
    writeln!(out, "field q={}", form.field().q()).unwrap();
    writeln!(out, "dim m={}", form.dim()).unwrap();
    writeln!(out, "grade {}", form.grade()).unwrap();
    for (idx, c) in form.terms() {
        let ids: Vec<String> = idx.indices().map(|i| i.to_string()).collect();
        writeln!(out, "{} : {}", ids.join(" "), c.idx()).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let f = Field::new(3).unwrap();
        let w = AltForm::from_words(f, 7, 3, &[(1, &[1, 2, 3]), (-1, &[4, 5, 6]), (1, &[7, 1, 4])]).unwrap();
        let text = write_form(&w);
        assert_eq!(parse_form(&text).unwrap(), w);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# omega\n\nfield q=2\ndim m=7  # seven\ngrade 3\n\n1 2 3 : 1\n1 4 5:1\n";
        let w = parse_form(text).unwrap();
        assert_eq!(w.nnz(), 2);
        assert_eq!(w.dim(), 7);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("field q=6\ndim m=7\ngrade 3\n", 1),
            ("field q=2\ndim m=7\ngrade 3\n1 2 : 1\n", 4),
            ("field q=2\ndim m=7\ngrade 3\n1 2 3 : 1\n\n2 1 3 : 1\n", 6),
            ("field q=2\ndim m=7\ngrade 3\n1 2 3 : 1\n1 2 3 : 1\n", 5),
            ("field q=2\ndim m=7\ngrade 3\n1 2 8 : 1\n", 4),
            ("field q=2\ndim m=7\ngrade 3\n1 2 3 : 2\n", 4),
            ("field q=2\ndim m=7\ngrade 3\n1 2 x : 1\n", 4),
            ("field q=2\ngrade 3\n", 2),
            ("field q=2\ndim m=7\n", 3),
        ];
        for (text, line) in cases {
            match parse_form(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
