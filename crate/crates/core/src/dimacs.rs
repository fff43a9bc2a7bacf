//! DIMACS CNF reading and writing.
//!
//! Grammar: `c` comment lines, a single `p cnf <n> <m>` header, then signed
//! integers separated by whitespace, each clause closed by `0`. Clauses may
//! span lines. A line starting with `%` ends the data (SATLIB files carry it).

use std::fmt;

use thiserror::Error;

use crate::sat::CnfFormula;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing 'p cnf' header")]
    MissingHeader,
    #[error("duplicate header")]
    DuplicateHeader,
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("invalid token '{0}'")]
    InvalidToken(String),
    #[error("literal {literal} out of range for {num_vars} variables")]
    LiteralOutOfRange { literal: i64, num_vars: u32 },
    #[error("clause data before header")]
    ClauseBeforeHeader,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

/// 1-based source position of the first literal of a clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DimacsDocument {
    pub num_vars: u32,
    pub declared_clauses: usize,
    pub clauses: Vec<Vec<i64>>,
    /// Comment text without the leading `c`, in source order.
    pub comments: Vec<String>,
    pub positions: Vec<Position>,
    pub warnings: Vec<String>,
}

impl DimacsDocument {
    pub fn new(num_vars: u32, clauses: Vec<Vec<i64>>) -> Self {
        Self {
            num_vars,
            declared_clauses: clauses.len(),
            clauses,
            ..Self::default()
        }
    }

    pub fn from_formula(f: &CnfFormula) -> Self {
        let clauses = f
            .clauses()
            .iter()
            .map(|c| c.literals().iter().map(|l| l.to_dimacs()).collect())
            .collect();
        Self::new(f.num_vars(), clauses)
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn to_formula(&self) -> Result<CnfFormula> {
        CnfFormula::from_dimacs(self.num_vars, &self.clauses)
    }

    /// Drops comments, positions and warnings and sets the declared count to
    /// the actual one. Writing then parsing a normalized document is the
    /// identity.
    pub fn normalized(&self) -> Self {
        Self::new(self.num_vars, self.clauses.clone())
    }
}

impl fmt::Display for DimacsDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_dimacs(self))
    }
}

fn parse_count(token: &str, what: &str) -> std::result::Result<u64, ParseErrorKind> {
    token
        .parse::<u64>()
        .map_err(|_| ParseErrorKind::MalformedHeader(format!("{what} '{token}' is not a count")))
}

pub fn parse_dimacs(text: &str) -> std::result::Result<DimacsDocument, ParseError> {
    let mut doc = DimacsDocument::default();
    let mut header: Option<Position> = None;
    let mut current: Vec<i64> = Vec::new();
    let mut current_pos: Option<Position> = None;
    let err = |line, col, kind| ParseError { line, col, kind };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim_start();
        let indent = raw.len() - trimmed.len();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                doc.comments.push(rest.strip_prefix(' ').unwrap_or(rest).to_string());
                continue;
            }
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, indent + 1, ParseErrorKind::DuplicateHeader));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let malformed = |msg: &str| err(line_no, indent + 1, ParseErrorKind::MalformedHeader(msg.into()));
            if fields.len() != 4 || fields[0] != "p" {
                return Err(malformed("expected 'p cnf <variables> <clauses>'"));
            }
            if fields[1] != "cnf" {
                return Err(malformed("format must be 'cnf'"));
            }
            let n = parse_count(fields[2], "variable count").map_err(|k| err(line_no, indent + 1, k))?;
            let m = parse_count(fields[3], "clause count").map_err(|k| err(line_no, indent + 1, k))?;
            doc.num_vars = u32::try_from(n).map_err(|_| malformed("variable count too large"))?;
            doc.declared_clauses = usize::try_from(m).map_err(|_| malformed("clause count too large"))?;
            header = Some(Position {
                line: line_no,
                col: indent + 1,
            });
            continue;
        }

        let mut offset = 0;
        for token in raw.split_whitespace() {
            let start = raw[offset..].find(token).map_or(offset, |p| p + offset);
            offset = start + token.len();
            let col = start + 1;
            if header.is_none() {
                return Err(err(line_no, col, ParseErrorKind::ClauseBeforeHeader));
            }
            let lit: i64 = token
                .parse()
                .map_err(|_| err(line_no, col, ParseErrorKind::InvalidToken(token.to_string())))?;
            if lit == 0 {
                doc.clauses.push(std::mem::take(&mut current));
                doc.positions.push(current_pos.take().unwrap_or(Position { line: line_no, col }));
                continue;
            }
            if lit.unsigned_abs() > u64::from(doc.num_vars) {
                return Err(err(
                    line_no,
                    col,
                    ParseErrorKind::LiteralOutOfRange {
                        literal: lit,
                        num_vars: doc.num_vars,
                    },
                ));
            }
            current_pos.get_or_insert(Position { line: line_no, col });
            current.push(lit);
        }
    }

    if header.is_none() {
        return Err(err(1, 1, ParseErrorKind::MissingHeader));
    }
    if !current.is_empty() {
        doc.warnings.push("final clause has no terminating 0".to_string());
        doc.clauses.push(current);
        doc.positions.push(current_pos.unwrap_or(Position { line: 1, col: 1 }));
    }
    if doc.clauses.len() != doc.declared_clauses {
        doc.warnings.push(format!(
            "header declares {} clauses, found {}",
            doc.declared_clauses,
            doc.clauses.len()
        ));
    }
    Ok(doc)
}

/// Comments first, then the header, then one clause per line.
pub fn write_dimacs(doc: &DimacsDocument) -> String {
    let mut out = String::new();
    for c in &doc.comments {
        if c.is_empty() {
            out.push_str("c\n");
        } else {
            out.push_str("c ");
            out.push_str(c);
            out.push('\n');
        }
    }
    out.push_str(&format!("p cnf {} {}\n", doc.num_vars, doc.clauses.len()));
    for clause in &doc.clauses {
        for lit in clause {
            out.push_str(&lit.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_formula(text: &str) -> Result<(DimacsDocument, CnfFormula)> {
    let doc = parse_dimacs(text)?;
    let f = doc.to_formula()?;
    Ok((doc, f))
}
