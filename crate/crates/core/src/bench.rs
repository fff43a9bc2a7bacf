//! Timing grid over random instances: per method, wall time and expansion
//! work as `n` and the clause ratio `m / n` vary.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::gen::gen_random_ksat;
use crate::run::{run, Method, RunConfig};
use crate::sat::Status;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub ns: Vec<u32>,
    pub ratios: Vec<f64>,
    pub k: u32,
    pub instances: u32,
    pub seed: u64,
    pub methods: Vec<Method>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            ns: vec![6, 8, 10, 12],
            ratios: vec![2.0, 4.26, 6.0],
            k: 3,
            instances: 5,
            seed: 0,
            methods: Method::RIGOROUS.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: Method,
    pub n: u32,
    pub m: usize,
    pub ratio: f64,
    pub instances: u32,
    pub sat: u32,
    pub mean_ms: f64,
    /// Mean atoms touched during expansion (dnf) or enumerated (oracle).
    pub mean_atoms_examined: f64,
    pub mean_expansion_size: f64,
}

pub fn bench(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &n in &config.ns {
        for &ratio in &config.ratios {
            let m = (ratio * n as f64).round() as usize;
            let docs = (0..config.instances)
                .map(|i| gen_random_ksat(n, m, config.k.min(n), config.seed + u64::from(i)))
                .collect::<Result<Vec<_>>>()?;
            for &method in &config.methods {
                let cfg = RunConfig::with_method(method);
                let (mut ms, mut examined, mut size, mut sat) = (0.0, 0.0, 0.0, 0);
                for doc in &docs {
                    let start = Instant::now();
                    let r = run(&cfg, doc)?;
                    ms += start.elapsed().as_secs_f64() * 1e3;
                    examined += r.counters.atoms_examined as f64;
                    size += r.counters.expansion_size as f64;
                    sat += u32::from(r.status == Status::Sat);
                }
                let count = f64::from(config.instances.max(1));
                rows.push(BenchRow {
                    method,
                    n,
                    m,
                    ratio,
                    instances: config.instances,
                    sat,
                    mean_ms: ms / count,
                    mean_atoms_examined: examined / count,
                    mean_expansion_size: size / count,
                });
            }
        }
    }
    Ok(rows)
}

pub fn format_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:>4} {:>5} {:>6} {:>5} {:>11} {:>14} {:>12}",
        "method", "n", "m", "m/n", "sat", "mean_ms", "atoms_exam", "expansion"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<10} {:>4} {:>5} {:>6.2} {:>5} {:>11.3} {:>14.1} {:>12.1}",
            r.method.name(),
            r.n,
            r.m,
            r.ratio,
            format!("{}/{}", r.sat, r.instances),
            r.mean_ms,
            r.mean_atoms_examined,
            r.mean_expansion_size
        );
    }
    out
}
