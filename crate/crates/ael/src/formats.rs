//! Readers for DIMACS CNF and the QDIMACS-lite ∃∀-DNF format.
//!
//! QDIMACS-lite looks like DIMACS with a `p dnf <vars> <terms>` header, at
//! most one `e … 0` line followed by at most one `a … 0` line, then one term
//! per line as literals ending in `0`. A line holding only `0` is the empty
//! (true) term. Lines starting with `c` are comments.

use ael_core::reductions::{Cnf, Qbf2};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing problem line")]
    MissingHeader,
    #[error("header declares {declared} {what}, found {found}")]
    CountMismatch {
        what: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("unterminated clause or term at end of input")]
    Unterminated,
}

fn line_error(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Line {
        line,
        message: message.into(),
    }
}

fn parse_header(line_no: usize, rest: &str, kind: &str) -> Result<(u32, usize), FormatError> {
    let fields: Vec<&str> = rest.split_whitespace().collect();
    match fields.as_slice() {
        [k, vars, count] if *k == kind => {
            let vars = vars
                .parse()
                .map_err(|_| line_error(line_no, format!("bad variable count '{vars}'")))?;
            let count = count
                .parse()
                .map_err(|_| line_error(line_no, format!("bad count '{count}'")))?;
            Ok((vars, count))
        }
        _ => Err(line_error(
            line_no,
            format!("expected 'p {kind} <vars> <count>'"),
        )),
    }
}

fn parse_literals(line_no: usize, text: &str, num_vars: u32) -> Result<Vec<i32>, FormatError> {
    text.split_whitespace()
        .map(|tok| {
            let lit: i32 = tok
                .parse()
                .map_err(|_| line_error(line_no, format!("bad literal '{tok}'")))?;
            if lit.unsigned_abs() > num_vars {
                return Err(line_error(
                    line_no,
                    format!("variable {} exceeds header", lit.unsigned_abs()),
                ));
            }
            Ok(lit)
        })
        .collect()
}

fn is_comment(line: &str) -> bool {
    line.is_empty() || line.starts_with('c') || line.starts_with('%')
}

/// Reads a DIMACS CNF file. Clauses may span lines; each ends with `0`.
pub fn parse_dimacs(text: &str) -> Result<Cnf, FormatError> {
    let mut header = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if is_comment(line) {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(line_error(line_no, "second problem line"));
            }
            header = Some(parse_header(line_no, rest, "cnf")?);
            continue;
        }
        let (num_vars, _) = header.ok_or(FormatError::MissingHeader)?;
        for lit in parse_literals(line_no, line, num_vars)? {
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    let (num_vars, declared) = header.ok_or(FormatError::MissingHeader)?;
    if !current.is_empty() {
        return Err(FormatError::Unterminated);
    }
    if clauses.len() != declared {
        return Err(FormatError::CountMismatch {
            what: "clauses",
            declared,
            found: clauses.len(),
        });
    }
    Ok(Cnf { num_vars, clauses })
}

/// Reads a QDIMACS-lite `∃∀` DNF file.
pub fn parse_qdimacs_lite(text: &str) -> Result<Qbf2, FormatError> {
    let mut header = None;
    let mut q = Qbf2::default();
    let mut seen_exists = false;
    let mut seen_forall = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if is_comment(line) {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(line_error(line_no, "second problem line"));
            }
            header = Some(parse_header(line_no, rest, "dnf")?);
            continue;
        }
        let (num_vars, _) = header.ok_or(FormatError::MissingHeader)?;
        let block = |rest: &str| -> Result<Vec<u32>, FormatError> {
            let lits = parse_literals(line_no, rest, num_vars)?;
            match lits.split_last() {
                Some((0, vars)) if vars.iter().all(|&v| v > 0) => {
                    Ok(vars.iter().map(|&v| v as u32).collect())
                }
                _ => Err(line_error(
                    line_no,
                    "quantifier block needs positive variables ending in 0",
                )),
            }
        };
        if let Some(rest) = line.strip_prefix('e') {
            if seen_exists || seen_forall || !q.terms.is_empty() {
                return Err(line_error(
                    line_no,
                    "the 'e' block must come first and only once",
                ));
            }
            seen_exists = true;
            q.exists = block(rest)?;
            continue;
        }
        if let Some(rest) = line.strip_prefix('a') {
            if seen_forall || !q.terms.is_empty() {
                return Err(line_error(
                    line_no,
                    "the 'a' block must precede the terms and appear once",
                ));
            }
            seen_forall = true;
            q.forall = block(rest)?;
            continue;
        }
        let lits = parse_literals(line_no, line, num_vars)?;
        match lits.split_last() {
            Some((0, term)) if !term.contains(&0) => q.terms.push(term.to_vec()),
            _ => {
                return Err(line_error(
                    line_no,
                    "a term is one line of literals ending in 0",
                ))
            }
        }
    }
    let (_, declared) = header.ok_or(FormatError::MissingHeader)?;
    if q.terms.len() != declared {
        return Err(FormatError::CountMismatch {
            what: "terms",
            declared,
            found: q.terms.len(),
        });
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs() {
        let cnf = parse_dimacs("c example\np cnf 3 2\n1 -3 0\n2 3\n-1 0\n").unwrap();
        assert_eq!(cnf.num_vars, 3);
        assert_eq!(cnf.clauses, vec![vec![1, -3], vec![2, 3, -1]]);
        assert_eq!(parse_dimacs("1 0\n"), Err(FormatError::MissingHeader));
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n2 0\n"),
            Err(FormatError::Line { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 1 2\n1 0\n"),
            Err(FormatError::CountMismatch { .. })
        ));
        assert_eq!(
            parse_dimacs("p cnf 1 1\n1\n"),
            Err(FormatError::Unterminated)
        );
    }

    #[test]
    fn qdimacs_lite() {
        let q = parse_qdimacs_lite("p dnf 2 3\ne 1 0\na 2 0\n1 2 0\n-2 0\n0\n").unwrap();
        assert_eq!(q.exists, vec![1]);
        assert_eq!(q.forall, vec![2]);
        assert_eq!(q.terms, vec![vec![1, 2], vec![-2], vec![]]);
        assert!(parse_qdimacs_lite("p dnf 2 0\na 2 0\ne 1 0\n").is_err());
        assert!(parse_qdimacs_lite("p dnf 2 1\ne 1 0\n1 2\n").is_err());
        assert!(parse_qdimacs_lite("p dnf 2 1\ne -1 0\n1 0\n").is_err());
    }
}
