//! Method dispatch behind the command line.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dimacs::{parse_dimacs, DimacsDocument};
use crate::lattice::AtomId;
use crate::null_geometry::{atom_of_lambda, o1n_cover_test};
use crate::orthogonal::{cover_search, SamplerConfig, DEFAULT_GIVENS_STEPS, DEFAULT_TOLERANCE};
use crate::report::{Report, Timings};
use crate::sat::{brute_force_oracle, encode_cnf_with_stats, witness_literals, Counters, Status};
use crate::symmetry::{solve_by_reduction, Backend};
use crate::{configured_max_n, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Dnf,
    Symmetry,
    O1nCover,
    OnCover,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Dnf,
        Method::Symmetry,
        Method::O1nCover,
        Method::OnCover,
        Method::Oracle,
    ];

    /// The exact methods; `on-cover` is excluded because its classifier is
    /// partial.
    pub const RIGOROUS: [Method; 4] = [Method::Dnf, Method::Symmetry, Method::O1nCover, Method::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Method::Dnf => "dnf",
            Method::Symmetry => "symmetry",
            Method::O1nCover => "o1n-cover",
            Method::OnCover => "on-cover",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown method '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub method: Method,
    pub seed: u64,
    /// Lower than the configured guard when set.
    pub max_n: Option<u32>,
    pub tolerance: f64,
    pub givens_steps: u32,
    pub format: OutputFormat,
    pub backend: Backend,
    /// Sampler sizes for `on-cover`.
    pub sampler: SamplerConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            method: Method::Dnf,
            seed: 0,
            max_n: None,
            tolerance: DEFAULT_TOLERANCE,
            givens_steps: DEFAULT_GIVENS_STEPS,
            format: OutputFormat::Json,
            backend: Backend::Atomset,
            sampler: SamplerConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn guard(&self) -> Result<u32> {
        let configured = configured_max_n();
        match self.max_n {
            None => Ok(configured),
            Some(max) if max <= configured => Ok(max),
            Some(max) => Err(Error::InvalidParameters(format!(
                "--max-n {max} exceeds the configured guard {configured}"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.guard()?;
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.givens_steps == 0 {
            return Err(Error::InvalidParameters("givens steps must be positive".into()));
        }
        Ok(())
    }

    fn sampler_config(&self) -> SamplerConfig {
        SamplerConfig {
            seed: self.seed,
            givens_steps: self.givens_steps,
            tolerance: self.tolerance,
            ..self.sampler
        }
    }
}

fn report(
    status: Status,
    witness: Option<AtomId>,
    method: Method,
    doc: &DimacsDocument,
    counters: Counters,
    details: serde_json::Value,
) -> Report {
    Report {
        status,
        witness: witness.as_ref().map(witness_literals),
        method: method.name().to_string(),
        n: doc.num_vars,
        m: doc.num_clauses(),
        counters,
        timings: Timings::default(),
        warnings: doc.warnings.clone(),
        experimental: method == Method::OnCover,
        details,
    }
}

pub fn run(config: &RunConfig, doc: &DimacsDocument) -> Result<Report> {
    config.validate()?;
    let guard = config.guard()?;
    if doc.num_vars > guard {
        return Err(Error::GuardExceeded {
            n: doc.num_vars,
            max: guard,
        });
    }
    let f = doc.to_formula()?;
    let start = Instant::now();
    let base_counters = Counters {
        clauses: f.num_clauses() as u64,
        ..Counters::default()
    };
    let method = config.method;
    let mut out = match method {
        Method::Dnf => {
            let (s, stats) = encode_cnf_with_stats(&f)?;
            let witness = s.first();
            let counters = Counters {
                atoms_examined: stats.atoms_examined,
                expansion_size: s.count(),
                ..base_counters
            };
            let status = if witness.is_some() { Status::Sat } else { Status::Unsat };
            report(status, witness, method, doc, counters, serde_json::Value::Null)
        }
        Method::Symmetry => {
            let r = solve_by_reduction(&f, config.backend)?;
            let mut rep = report(
                r.status,
                r.witness,
                method,
                doc,
                r.counters,
                serde_json::json!({ "backend": config.backend }),
            );
            rep.warnings.extend(r.warnings);
            rep
        }
        Method::O1nCover => {
            let v = o1n_cover_test(&f)?;
            let witness = v.witness.as_ref().map(atom_of_lambda);
            let details = serde_json::to_value(&v).expect("verdict serializes");
            report(v.status, witness, method, doc, base_counters, details)
        }
        Method::OnCover => {
            let r = cover_search(&f, &config.sampler_config())?;
            let witness = r.uncovered.first().map(atom_of_lambda);
            let status = if witness.is_some() { Status::Sat } else { Status::Unknown };
            let counters = Counters {
                samples: r.samples,
                classified: r.classified,
                ..base_counters
            };
            let details = serde_json::to_value(&r).expect("cover report serializes");
            let mut rep = report(status, witness, method, doc, counters, details);
            if !r.consistent {
                rep.warnings
                    .push("cover search disagrees with the O(1)^n cover test".to_string());
            }
            rep
        }
        Method::Oracle => {
            let sols = brute_force_oracle(&f)?;
            let counters = Counters {
                atoms_examined: 1u64 << f.num_vars(),
                expansion_size: sols.len() as u64,
                ..base_counters
            };
            let witness = sols.first().copied();
            let status = if witness.is_some() { Status::Sat } else { Status::Unsat };
            report(status, witness, method, doc, counters, serde_json::Value::Null)
        }
    };
    if let Some(w) = out.witness.as_ref() {
        debug_assert_eq!(w.len(), doc.num_vars as usize);
    }
    let solve_ms = start.elapsed().as_secs_f64() * 1e3;
    out.timings.solve_ms = solve_ms;
    out.timings.total_ms = solve_ms;
    Ok(out)
}

/// Parses and runs, filling the parse timing.
pub fn run_text(config: &RunConfig, text: &str) -> Result<Report> {
    let start = Instant::now();
    let doc = parse_dimacs(text)?;
    let parse_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut r = run(config, &doc)?;
    r.timings.parse_ms = parse_ms;
    r.timings.total_ms = parse_ms + r.timings.solve_ms;
    Ok(r)
}
