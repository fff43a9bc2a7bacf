use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clifsat::bench::{bench, format_table, BenchConfig};
use clifsat::dimacs::{parse_dimacs, write_dimacs, DimacsDocument};
use clifsat::gen::gen_random_ksat;
use clifsat::report::{exit_code, Report, EXIT_ERROR};
use clifsat::run::{run_text, Method, OutputFormat, RunConfig};
use clifsat::sat::{brute_force_oracle, dnf_expand, witness_literals, Status};
use clifsat::symmetry::{symmetry_test, Backend};
use clifsat::witness::parse_witness;
use clifsat::{Error, MAX_N_ENV};

#[derive(Parser)]
#[command(name = "clifsat", version, about = "SAT via idempotents of Cl(R^{n,n})")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Seed for every sampler and generator.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Reject instances with more variables; at most the configured guard.
    #[arg(long, global = true, env = MAX_N_ENV)]
    max_n: Option<u32>,
    /// Numeric tolerance for the continuous layer.
    #[arg(long, global = true, default_value_t = clifsat::orthogonal::DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Grid steps per Givens angle.
    #[arg(long, global = true, default_value_t = clifsat::orthogonal::DEFAULT_GIVENS_STEPS)]
    givens_steps: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Dnf,
    Symmetry,
    O1nCover,
    OnCover,
    Oracle,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Dnf => Method::Dnf,
            MethodArg::Symmetry => Method::Symmetry,
            MethodArg::O1nCover => Method::O1nCover,
            MethodArg::OnCover => Method::OnCover,
            MethodArg::Oracle => Method::Oracle,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Atomset,
    Multivector,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Atomset => Backend::Atomset,
            BackendArg::Multivector => Backend::Multivector,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Group {
    /// Exact cover test over the diagonal subgroup.
    O1n,
    /// Sampled search over the full orthogonal group (experimental).
    On,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a DIMACS CNF file. Exit 10 SAT, 20 UNSAT, 1 error.
    Solve {
        /// DIMACS file, or '-' for stdin.
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Dnf)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = BackendArg::Atomset)]
        backend: BackendArg,
    },
    /// List the satisfying assignments (the DNF of the encoded problem).
    Expand {
        file: PathBuf,
        /// Print at most this many assignments.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Conjugate the encoded problem by every generator.
    UnsatTest {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = BackendArg::Atomset)]
        backend: BackendArg,
    },
    /// Cover test over O(1)^n or sampled search over O(n).
    Cover {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Group::On)]
        group: Group,
        #[arg(long)]
        haar_samples: Option<u64>,
        #[arg(long)]
        givens_samples: Option<u64>,
        #[arg(long)]
        involution_samples: Option<u64>,
    },
    /// Write a random k-SAT instance in DIMACS format.
    Gen {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        k: u32,
        /// Output file; stdout when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Time the methods over a grid of sizes and clause ratios.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [6u32, 8, 10, 12])]
        ns: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_values_t = [2.0, 4.26, 6.0])]
        ratios: Vec<f64>,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, default_value_t = 5)]
        instances: u32,
        #[arg(long, value_enum, value_delimiter = ',')]
        methods: Vec<MethodArg>,
    },
    /// Check a witness (JSON report, v-lines or literal list) against a
    /// formula. Exit 0 when it holds, 1 otherwise.
    Verify { file: PathBuf, witness: PathBuf },
}

fn read_input(path: &Path) -> Result<String, String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn load(path: &Path, config: &RunConfig) -> Result<DimacsDocument, String> {
    let doc = parse_dimacs(&read_input(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let guard = config.guard().map_err(|e| e.to_string())?;
    if doc.num_vars > guard {
        return Err(Error::GuardExceeded {
            n: doc.num_vars,
            max: guard,
        }
        .to_string());
    }
    Ok(doc)
}

fn run_config(g: &GlobalArgs, method: Method, backend: Backend) -> RunConfig {
    RunConfig {
        method,
        seed: g.seed,
        max_n: g.max_n,
        tolerance: g.tolerance,
        givens_steps: g.givens_steps,
        format: match g.format {
            Format::Json => OutputFormat::Json,
            Format::Text => OutputFormat::Text,
        },
        backend,
        ..RunConfig::default()
    }
}

fn emit_report(r: &Report, format: Format) {
    match format {
        Format::Json => println!("{}", r.to_json()),
        Format::Text => print!("{}", r.to_text()),
    }
}

fn emit_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn solve(config: &RunConfig, path: &Path, format: Format) -> Result<i32, String> {
    let text = read_input(path)?;
    let r = run_text(config, &text).map_err(|e| format!("{}: {e}", path.display()))?;
    emit_report(&r, format);
    Ok(r.exit_code())
}

fn execute(cli: Cli) -> Result<i32, String> {
    let g = &cli.global;
    match cli.command {
        Command::Solve {
            file,
            method,
            backend,
        } => solve(&run_config(g, method.into(), backend.into()), &file, g.format),
        Command::Expand { file, limit } => {
            let config = run_config(g, Method::Dnf, Backend::Atomset);
            let doc = load(&file, &config)?;
            let f = doc.to_formula().map_err(|e| e.to_string())?;
            let atoms = dnf_expand(&f).map_err(|e| e.to_string())?;
            let status = if atoms.is_empty() { Status::Unsat } else { Status::Sat };
            let shown: Vec<Vec<i64>> = atoms
                .iter()
                .take(limit.unwrap_or(usize::MAX))
                .map(witness_literals)
                .collect();
            match g.format {
                Format::Json => emit_json(&serde_json::json!({
                    "status": status,
                    "n": doc.num_vars,
                    "m": doc.num_clauses(),
                    "count": atoms.len(),
                    "atoms": shown,
                })),
                Format::Text => {
                    println!("c {} satisfying assignment(s)", atoms.len());
                    for lits in &shown {
                        let line: Vec<String> = lits.iter().map(i64::to_string).collect();
                        println!("v {} 0", line.join(" "));
                    }
                }
            }
            Ok(exit_code(status))
        }
        Command::UnsatTest { file, backend } => {
            let config = run_config(g, Method::Symmetry, backend.into());
            let doc = load(&file, &config)?;
            let f = doc.to_formula().map_err(|e| e.to_string())?;
            let r = symmetry_test(&f, backend.into()).map_err(|e| e.to_string())?;
            match g.format {
                Format::Json => emit_json(&r),
                Format::Text => {
                    for (i, s) in r.symmetric_under.iter().enumerate() {
                        println!("c gamma_{} {}", i + 1, if *s { "fixes S" } else { "moves S" });
                    }
                    println!("s {}", r.verdict);
                }
            }
            Ok(exit_code(r.verdict))
        }
        Command::Cover {
            file,
            group,
            haar_samples,
            givens_samples,
            involution_samples,
        } => {
            let method = match group {
                Group::O1n => Method::O1nCover,
                Group::On => Method::OnCover,
            };
            let mut config = run_config(g, method, Backend::Atomset);
            let s = &mut config.sampler;
            s.haar_samples = haar_samples.unwrap_or(s.haar_samples);
            s.givens_samples = givens_samples.unwrap_or(s.givens_samples);
            s.involution_samples = involution_samples.unwrap_or(s.involution_samples);
            solve(&config, &file, g.format)
        }
        Command::Gen { n, m, k, output } => {
            let doc = gen_random_ksat(n, m, k, g.seed).map_err(|e| e.to_string())?;
            let text = write_dimacs(&doc);
            match output {
                Some(path) => fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?,
                None => io::stdout()
                    .write_all(text.as_bytes())
                    .map_err(|e| e.to_string())?,
            }
            Ok(0)
        }
        Command::Bench {
            ns,
            ratios,
            k,
            instances,
            methods,
        } => {
            let config = BenchConfig {
                ns,
                ratios,
                k,
                instances,
                seed: g.seed,
                methods: if methods.is_empty() {
                    Method::RIGOROUS.to_vec()
                } else {
                    methods.into_iter().map(Method::from).collect()
                },
            };
            let rows = bench(&config).map_err(|e| e.to_string())?;
            match g.format {
                Format::Json => emit_json(&rows),
                Format::Text => print!("{}", format_table(&rows)),
            }
            Ok(0)
        }
        Command::Verify { file, witness } => {
            let config = run_config(g, Method::Oracle, Backend::Atomset);
            let doc = load(&file, &config)?;
            let f = doc.to_formula().map_err(|e| e.to_string())?;
            let w = parse_witness(&read_input(&witness)?).map_err(|e| format!("{}: {e}", witness.display()))?;
            let claimed = w.status.unwrap_or(if w.literals.is_some() {
                Status::Sat
            } else {
                Status::Unknown
            });
            let (ok, message) = match claimed {
                Status::Sat => {
                    let a = w.to_assignment(f.num_vars()).map_err(|e| e.to_string())?;
                    if w.literals.is_none() {
                        (false, "SAT claimed without an assignment".to_string())
                    } else if f.is_satisfied_by(&a) {
                        (true, format!("assignment {a} satisfies all {} clauses", f.num_clauses()))
                    } else {
                        let k = f.clauses().iter().position(|c| !c.is_satisfied_by(&a)).unwrap_or(0);
                        (false, format!("assignment {a} falsifies clause {}", k + 1))
                    }
                }
                Status::Unsat => {
                    let sols = brute_force_oracle(&f).map_err(|e| e.to_string())?;
                    match sols.first() {
                        None => (true, "UNSAT confirmed by exhaustive enumeration".to_string()),
                        Some(a) => (false, format!("UNSAT claimed but {a} satisfies the formula")),
                    }
                }
                Status::Unknown => (false, "nothing to verify for UNKNOWN".to_string()),
            };
            match g.format {
                Format::Json => emit_json(&serde_json::json!({ "verified": ok, "claimed": claimed, "message": message })),
                Format::Text => println!("{} {message}", if ok { "OK" } else { "FAIL" }),
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("clifsat: {msg}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
