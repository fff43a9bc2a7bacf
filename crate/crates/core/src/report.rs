//! The JSON report every method emits. All methods fill the same fields so
//! downstream tooling can rely on a single schema.

use serde::{Deserialize, Serialize};

use crate::sat::{witness_literals, Counters, SolveReport, Status};

pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 0;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub parse_ms: f64,
    pub solve_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub status: Status,
    /// Signed 1-indexed literals, one per variable; `null` unless SAT.
    pub witness: Option<Vec<i64>>,
    pub method: String,
    pub n: u32,
    pub m: usize,
    pub counters: Counters,
    pub timings: Timings,
    pub warnings: Vec<String>,
    pub experimental: bool,
    /// Method-specific extras; `null` when there are none.
    pub details: serde_json::Value,
}

impl Report {
    pub fn from_solve(r: &SolveReport, n: u32, m: usize) -> Self {
        Self {
            status: r.status,
            witness: r.witness.as_ref().map(witness_literals),
            method: r.method.to_string(),
            n,
            m,
            counters: r.counters.clone(),
            timings: Timings {
                solve_ms: r.wall_time.as_secs_f64() * 1e3,
                ..Timings::default()
            },
            warnings: r.warnings.clone(),
            experimental: false,
            details: serde_json::Value::Null,
        }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(self.status)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Solver-style text: `s` status line, `v` witness line, `c` comments.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("c method {}\n", self.method));
        if self.experimental {
            out.push_str("c experimental\n");
        }
        for w in &self.warnings {
            out.push_str(&format!("c warning: {w}\n"));
        }
        out.push_str(&format!(
            "c n {} m {} solve {:.3} ms\n",
            self.n, self.m, self.timings.solve_ms
        ));
        out.push_str(match self.status {
            Status::Sat => "s SATISFIABLE\n",
            Status::Unsat => "s UNSATISFIABLE\n",
            Status::Unknown => "s UNKNOWN\n",
        });
        if let Some(lits) = &self.witness {
            out.push('v');
            for l in lits {
                out.push_str(&format!(" {l}"));
            }
            out.push_str(" 0\n");
        }
        out
    }
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Sat => EXIT_SAT,
        Status::Unsat => EXIT_UNSAT,
        Status::Unknown => EXIT_UNKNOWN,
    }
}
