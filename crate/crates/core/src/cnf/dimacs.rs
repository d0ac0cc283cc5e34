//! DIMACS CNF text.
//!
//! Emitted files are `c` comment lines, the `p cnf <vars> <clauses>`
//! header, then one space-separated, `0`-terminated clause per line. The
//! parser also accepts CRLF line endings, clauses spanning several lines
//! and comments after the header.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::CnfDocument;
use crate::error::{Error, Result};

pub fn emit(doc: &CnfDocument) -> String {
    let mut out = String::new();
    for c in doc.comments() {
        if c.is_empty() {
            out.push_str("c\n");
        } else {
            let _ = writeln!(out, "c {c}");
        }
    }
    let _ = writeln!(out, "p cnf {} {}", doc.var_count(), doc.clause_count());
    for clause in doc.clauses() {
        for lit in clause {
            let _ = write!(out, "{lit} ");
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse(text: &str) -> Result<CnfDocument> {
    let err = |line: usize, msg: String| Error::Dimacs { line, msg };
    let mut comments = Vec::new();
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut pending: Vec<i32> = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.split('\n').enumerate() {
        let n = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        last_line = n;
        if trimmed == "c" || trimmed.starts_with("c ") || trimmed.starts_with("c\t") {
            comments.push(trimmed[1..].trim_start().to_string());
            continue;
        }
        if trimmed == "%" {
            // SATLIB end-of-formula marker.
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(err(n, "second header".into()));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", v, c] => v.parse::<u32>().ok().zip(c.parse::<usize>().ok()),
                _ => None,
            };
            let Some((vars, count)) = parsed.filter(|&(v, _)| v <= i32::MAX as u32) else {
                return Err(err(n, format!("malformed header {trimmed:?}")));
            };
            header = Some((vars, count));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(err(n, "clause before the header".into()));
        };
        for tok in trimmed.split_whitespace() {
            let lit: i32 = tok
                .parse()
                .map_err(|_| err(n, format!("bad literal {tok:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut pending));
            } else if lit.unsigned_abs() > vars {
                return Err(err(n, format!("literal {lit} exceeds {vars} variables")));
            } else {
                pending.push(lit);
            }
        }
    }

    let Some((vars, count)) = header else {
        return Err(err(last_line.max(1), "missing `p cnf` header".into()));
    };
    if !pending.is_empty() {
        return Err(err(last_line, "last clause is not terminated by 0".into()));
    }
    if clauses.len() != count {
        return Err(err(
            last_line,
            format!("header declares {count} clauses but {} were read", clauses.len()),
        ));
    }
    CnfDocument::new(comments, vars, clauses)
}

pub fn write_file(doc: &CnfDocument, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, emit(doc)).map_err(|e| Error::io(path, e))
}

pub fn read_file(path: impl AsRef<Path>) -> Result<CnfDocument> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SPLIT_FILE: &str =
        "c 10\np cnf 6 6\n1 2 3 0\n-1 -2 -3 0\n4 5 6 0\n-4 -5 -6 0\n1 1 1 0\n-2 -2 -2 0\n";

    #[test]
    fn split_listing_round_trips() {
        let doc = parse(SPLIT_FILE).unwrap();
        assert_eq!(doc.clause_count(), 6);
        assert_eq!(doc.clauses()[4], vec![1, 1, 1]);
        assert_eq!(emit(&doc), SPLIT_FILE);
    }

    #[test]
    fn crlf_and_spanning_clauses() {
        let doc = parse("c 10\r\np cnf 3 2\r\n1 2\r\n 3 0 -1\r\n0\r\n").unwrap();
        assert_eq!(doc.clauses(), &[vec![1, 2, 3], vec![-1]]);
        assert_eq!(emit(&doc), "c 10\np cnf 3 2\n1 2 3 0\n-1 0\n");
    }

    #[test]
    fn plain_units_and_empty_clause() {
        let doc = parse("p cnf 1 3\n1 0\n-1 0\n0\n").unwrap();
        assert_eq!(doc.clauses(), &[vec![1], vec![-1], vec![]]);
        assert_eq!(emit(&doc), "p cnf 1 3\n1 0\n-1 0\n0\n");
    }

    #[test]
    fn rejects_malformed_input() {
        let cases = [
            "p cnf 6 4\n1 2 7 0\n",
            "p cnf 6\n1 0\n",
            "p dnf 6 1\n1 0\n",
            "p cnf 6 1\n1 2 3\n",
            "p cnf 6 2\n1 2 3 0\n",
            "1 2 0\np cnf 2 1\n",
            "c only a comment\n",
            "p cnf 2 1\n1 x 0\n",
            "p cnf 2 1\np cnf 2 1\n1 0\n",
        ];
        for text in cases {
            assert!(matches!(parse(text), Err(Error::Dimacs { .. })), "{text:?}");
        }
        match parse("c\np cnf 6 4\n1 2 7 0\n") {
            Err(Error::Dimacs { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    fn arb_doc() -> impl Strategy<Value = CnfDocument> {
        (1u32..12).prop_flat_map(|vars| {
            let lit = (1..=vars as i32, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
            (
                prop::collection::vec("[a-z0-9 ]{0,12}", 0..3),
                prop::collection::vec(prop::collection::vec(lit, 0..5), 0..12),
            )
                .prop_map(move |(comments, clauses)| {
                    let comments = comments.into_iter().map(|c| c.trim().to_string()).collect();
                    CnfDocument::new(comments, vars, clauses).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn emit_parse_identity(doc in arb_doc()) {
            let text = emit(&doc);
            let back = parse(&text).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(emit(&back), text);
        }
    }
}
