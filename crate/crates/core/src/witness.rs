//! Reading assignments back for verification.
//!
//! Accepted inputs: a JSON report (its `status` and `witness` fields),
//! solver output with `s` and `v` lines, or a bare list of signed literals
//! optionally closed by `0`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::lattice::AtomId;
use crate::sat::Status;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("invalid JSON report: {0}")]
    Json(String),
    #[error("line {line}: invalid token '{token}'")]
    InvalidToken { line: usize, token: String },
    #[error("unknown status '{0}'")]
    UnknownStatus(String),
    #[error("variable {0} assigned both ways")]
    Conflict(u32),
    #[error("literal {literal} out of range for {num_vars} variables")]
    OutOfRange { literal: i64, num_vars: u32 },
    #[error("no status or literals found")]
    Empty,
}

impl From<WitnessError> for Error {
    fn from(e: WitnessError) -> Self {
        Error::InvalidParameters(e.to_string())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness {
    pub status: Option<Status>,
    /// `None` when the input states a status without literals.
    pub literals: Option<Vec<i64>>,
}

impl Witness {
    /// Variables that never appear default to false.
    pub fn to_assignment(&self, n: u32) -> std::result::Result<AtomId, WitnessError> {
        let mut values: BTreeMap<u32, bool> = BTreeMap::new();
        for &lit in self.literals.as_deref().unwrap_or(&[]) {
            if lit == 0 || lit.unsigned_abs() > u64::from(n) {
                return Err(WitnessError::OutOfRange {
                    literal: lit,
                    num_vars: n,
                });
            }
            let var = lit.unsigned_abs() as u32;
            let value = lit > 0;
            if values.insert(var, value).is_some_and(|old| old != value) {
                return Err(WitnessError::Conflict(var));
            }
        }
        let bits = values
            .iter()
            .filter(|(_, &v)| v)
            .fold(0u64, |b, (&var, _)| b | 1 << (var - 1));
        AtomId::new(n, bits).map_err(|_| WitnessError::OutOfRange {
            literal: i64::from(n),
            num_vars: n,
        })
    }
}

fn parse_status(s: &str) -> std::result::Result<Status, WitnessError> {
    match s.trim().to_ascii_uppercase().as_str() {
        "SAT" | "SATISFIABLE" => Ok(Status::Sat),
        "UNSAT" | "UNSATISFIABLE" => Ok(Status::Unsat),
        "UNKNOWN" | "INDETERMINATE" => Ok(Status::Unknown),
        other => Err(WitnessError::UnknownStatus(other.to_string())),
    }
}

fn parse_json(text: &str) -> std::result::Result<Witness, WitnessError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| WitnessError::Json(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| WitnessError::Json("expected an object".into()))?;
    let status = match obj.get("status") {
        None | Some(serde_json::Value::Null) => None,
        Some(serde_json::Value::String(s)) => Some(parse_status(s)?),
        Some(other) => return Err(WitnessError::Json(format!("status {other} is not a string"))),
    };
    let literals = match obj.get("witness") {
        None | Some(serde_json::Value::Null) => None,
        Some(serde_json::Value::Array(items)) => Some(
            items
                .iter()
                .map(|v| {
                    v.as_i64()
                        .filter(|&l| l != 0)
                        .ok_or_else(|| WitnessError::Json(format!("witness entry {v} is not a nonzero integer")))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?,
        ),
        Some(other) => return Err(WitnessError::Json(format!("witness {other} is not an array"))),
    };
    if status.is_none() && literals.is_none() {
        return Err(WitnessError::Empty);
    }
    Ok(Witness { status, literals })
}

pub fn parse_witness(text: &str) -> std::result::Result<Witness, WitnessError> {
    if text.trim_start().starts_with('{') {
        return parse_json(text);
    }
    let mut status = None;
    let mut literals: Vec<i64> = Vec::new();
    let mut saw_literals = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let body = if let Some(rest) = line.strip_prefix("s ") {
            status = Some(parse_status(rest)?);
            continue;
        } else if let Some(rest) = line.strip_prefix('v') {
            rest
        } else {
            line
        };
        for token in body.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| WitnessError::InvalidToken {
                line: idx + 1,
                token: token.to_string(),
            })?;
            saw_literals = true;
            if lit != 0 {
                literals.push(lit);
            }
        }
    }
    if status.is_none() && !saw_literals {
        return Err(WitnessError::Empty);
    }
    Ok(Witness {
        status,
        literals: saw_literals.then_some(literals),
    })
}

pub fn parse_assignment(text: &str, n: u32) -> Result<AtomId> {
    Ok(parse_witness(text)?.to_assignment(n)?)
}
