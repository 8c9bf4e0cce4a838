//! `unicell`: command-line front end to the unitary-similarity toolkit.
//!
//! Exit status: 0 for a definite result, 2 for an inconclusive verdict, 1 for
//! any error (message on stderr).

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Stdio};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use unicell::invariants::{arveson_test, norms_match, specht_test, InvariantReport, PolynomialFamily};
use unicell::json::{matrix_raw, matrix_to_json, parse_matrix, parse_polynomial};
use unicell::linalg::{eigenvalues, schur, spectral_norm, spectral_radius, CMatrix};
use unicell::poly::Polynomial;
use unicell::reconstruct::{reconstruct_with, serve_oracle, LineOracle, NormOracle, SimulatedOracle};
use unicell::similarity::{
    counterexample_pair, decide_unitary_similarity_with, principal_norm_profile, SimilarityOptions, Verdict,
};
use unicell::toeplitz::{alternating_sum, alternating_sum_is_contraction, ones_nilpotent, shift_matrix, volterra_sweep};

#[derive(Parser)]
#[command(name = "unicell", version, about = "Unitary similarity from norms of matrix polynomials")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone, Debug)]
struct Config {
    /// Relative tolerance used by every comparison.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for every random family and sample.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random polynomials in norm families.
    #[arg(long, global = true, default_value_t = 64)]
    family_size: usize,
    /// Degree bound of norm families [default: n].
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    /// Longest trace word examined [default: 2n].
    #[arg(long, global = true)]
    max_word_len: Option<usize>,
    /// Random samples (tensor tests; held-out replays in `reconstruct`).
    #[arg(long, global = true, default_value_t = 32)]
    samples: usize,
    /// Report format [default: csv for profile and volterra, json otherwise].
    #[arg(long, global = true, value_enum)]
    output: Option<Output>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Output {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand)]
enum Cmd {
    /// Spectral norm of a matrix, or of f(A_i) with --poly and --index.
    Norm {
        matrix: PathBuf,
        /// Polynomial JSON file; default f(t) = t.
        #[arg(long)]
        poly: Option<PathBuf>,
        /// Use the leading i x i submatrix.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Eigenvalues (Schur diagonal) and spectral radius.
    Eig { matrix: PathBuf },
    /// Complex Schur factorization A = U T U*.
    Schur { matrix: PathBuf },
    /// Decide unitary similarity; prints the verdict with its certificate.
    Similar { a: PathBuf, b: PathBuf },
    /// Norms |f(A_i)| over the standard family for every leading submatrix.
    Profile { matrix: PathBuf },
    /// Trace-word comparison of (A, A*) and (B, B*) up to --max-word-len.
    Specht { a: PathBuf, b: PathBuf },
    /// Norms of A (x) C + I (x) D against B (x) C + I (x) D for seeded (C, D).
    Arveson { a: PathBuf, b: PathBuf },
    /// Recover a hidden matrix from norm queries alone.
    Reconstruct {
        /// Hidden matrix answered by an in-process simulator.
        #[arg(long, conflicts_with = "oracle_cmd", required_unless_present = "oracle_cmd")]
        hidden: Option<PathBuf>,
        /// Shell command speaking the line protocol on stdin/stdout.
        #[arg(long, requires = "n")]
        oracle_cmd: Option<String>,
        /// Order of the hidden matrix behind --oracle-cmd.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Write the 3x3 pair with equal polynomial norms that is not unitarily similar.
    Counterexample {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        /// Files are written to <prefix>_A.json and <prefix>_Aprime.json.
        #[arg(long, default_value = "p")]
        out_prefix: String,
    },
    /// Norm of the order-m Volterra discretization against 4/pi.
    Volterra {
        #[arg(long, value_delimiter = ',', default_value = "100,200,400,800")]
        m_list: Vec<usize>,
    },
    /// Check the Toeplitz identities for S(n) and Q(n).
    Lemmas {
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Answer line-protocol queries about a matrix (stdin to stdout).
    #[command(hide = true)]
    ServeOracle { matrix: PathBuf },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(Report, Status), Failure>;

enum Status {
    Definite,
    Inconclusive,
}

enum Report {
    Json(Value),
    Table { header: Vec<&'static str>, rows: Vec<Vec<String>> },
    None,
}

impl Config {
    fn validate(&self) -> Result<(), Failure> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Failure(format!("--tol must lie in (0, 1), got {}", self.tol)));
        }
        for (name, v) in [
            ("--family-size", Some(self.family_size)),
            ("--samples", Some(self.samples)),
            ("--max-degree", self.max_degree),
            ("--max-word-len", self.max_word_len),
        ] {
            if v == Some(0) {
                return Err(Failure(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    fn degree(&self, n: usize) -> usize {
        self.max_degree.unwrap_or(n)
    }

    fn word_len(&self, n: usize) -> usize {
        self.max_word_len.unwrap_or(2 * n)
    }

    fn family(&self, n: usize) -> PolynomialFamily {
        PolynomialFamily::standard(self.degree(n), self.family_size, self.seed)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<CMatrix, Failure> {
    let a = parse_matrix(&read(path)?).map_err(|e| Failure(format!("{}: bad matrix JSON: {e}", path.display())))?;
    if !a.is_finite() {
        return Err(Failure(format!("{}: matrix has non-finite entries", path.display())));
    }
    Ok(a)
}

fn load_pair(a: &Path, b: &Path) -> Result<(CMatrix, CMatrix), Failure> {
    let (ma, mb) = (load_matrix(a)?, load_matrix(b)?);
    if ma.n() != mb.n() {
        return Err(Failure(format!("orders differ: {} has n = {}, {} has n = {}", a.display(), ma.n(), b.display(), mb.n())));
    }
    Ok((ma, mb))
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn raw(a: &CMatrix) -> Value {
    serde_json::from_str(matrix_raw(a).get()).expect("matrix JSON parses")
}

fn invariant(report: &InvariantReport) -> Value {
    serde_json::to_value(report).expect("report serializes")
}

fn run(cli: Cli) -> Outcome {
    let cfg = cli.config;
    cfg.validate()?;
    let definite = |v: Value| Ok((Report::Json(v), Status::Definite));
    match cli.command {
        Cmd::Norm { matrix, poly, index } => {
            let a = load_matrix(&matrix)?;
            let i = index.unwrap_or(a.n());
            let sub = a.leading_submatrix(i)?;
            let f = match poly {
                Some(p) => parse_polynomial(&read(&p)?).map_err(|e| Failure(format!("{}: bad polynomial JSON: {e}", p.display())))?,
                None => Polynomial::t(),
            };
            definite(json!({ "index": i, "poly": f, "norm": spectral_norm(&f.eval_matrix(&sub))? }))
        }
        Cmd::Eig { matrix } => {
            let a = load_matrix(&matrix)?;
            let ev: Vec<Value> = eigenvalues(&a)?.into_iter().map(complex).collect();
            definite(json!({ "eigenvalues": ev, "spectral_radius": spectral_radius(&a)? }))
        }
        Cmd::Schur { matrix } => {
            let a = load_matrix(&matrix)?;
            let s = schur(&a)?;
            let residual = (&(&(&s.unitary.u * &s.t) * &s.unitary.u.adjoint()) - &a).frobenius_norm();
            definite(json!({
                "t": raw(&s.t),
                "u": raw(&s.unitary.u),
                "unitarity_residual": s.unitary.unitarity_residual,
                "factorization_residual": residual,
            }))
        }
        Cmd::Similar { a, b } => {
            let (ma, mb) = load_pair(&a, &b)?;
            let n = ma.n();
            let opts = SimilarityOptions { tol: cfg.tol, word_len: cfg.max_word_len, ..SimilarityOptions::default() };
            let rep = decide_unitary_similarity_with(&ma, &mb, &opts)?;
            let family = cfg.family(n);
            let norms = norms_match(&ma, &mb, &family, cfg.tol)?;
            let status = if rep.verdict == Verdict::Inconclusive { Status::Inconclusive } else { Status::Definite };
            let v = json!({
                "verdict": rep.verdict,
                "method": rep.method,
                "reason": rep.reason,
                "witness": rep.witness.as_ref().map(|w| raw(&w.u)),
                "witness_unitarity_residual": rep.witness.as_ref().map(|w| w.unitarity_residual),
                "witness_residual": rep.witness_residual,
                "obstruction": rep.obstruction,
                "max_entry_diff": rep.max_entry_diff,
                "norm_family": { "description": family.description, "report": invariant(&norms) },
            });
            Ok((Report::Json(v), status))
        }
        Cmd::Profile { matrix } => {
            let a = load_matrix(&matrix)?;
            let family = cfg.family(a.n());
            let profile = principal_norm_profile(&a, &family)?;
            if cfg.output == Some(Output::Json) || cfg.output == Some(Output::Human) {
                return definite(json!({ "family": family.description, "polys": family.polys, "norms": profile }));
            }
            let mut rows = Vec::new();
            for (i, row) in profile.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    rows.push(vec![(i + 1).to_string(), j.to_string(), format!("{x:.17e}")]);
                }
            }
            Ok((Report::Table { header: vec!["index", "poly", "norm"], rows }, Status::Definite))
        }
        Cmd::Specht { a, b } => {
            let (ma, mb) = load_pair(&a, &b)?;
            definite(invariant(&specht_test(&ma, &mb, cfg.word_len(ma.n()), cfg.tol)?))
        }
        Cmd::Arveson { a, b } => {
            let (ma, mb) = load_pair(&a, &b)?;
            definite(invariant(&arveson_test(&ma, &mb, cfg.samples, cfg.seed, cfg.tol)?))
        }
        Cmd::Reconstruct { hidden, oracle_cmd, n } => {
            let v = match (hidden, oracle_cmd) {
                (Some(path), _) => {
                    let oracle = SimulatedOracle::new(&load_matrix(&path)?)?;
                    reconstruction_json(&oracle, &cfg)?
                }
                (None, Some(cmd)) => with_external_oracle(&cmd, n.expect("clap requires --n"), |o| reconstruction_json(o, &cfg))?,
                (None, None) => unreachable!("clap requires one oracle source"),
            };
            definite(v)
        }
        Cmd::Counterexample { alpha, beta, out_prefix } => {
            let (a, ap) = counterexample_pair(alpha, beta)?;
            let pa = format!("{out_prefix}_A.json");
            let pb = format!("{out_prefix}_Aprime.json");
            for (path, m) in [(&pa, &a), (&pb, &ap)] {
                fs::write(path, matrix_to_json(m) + "\n").map_err(|e| Failure(format!("cannot write {path}: {e}")))?;
            }
            definite(json!({ "alpha": alpha, "beta": beta, "a": pa, "a_prime": pb }))
        }
        Cmd::Volterra { m_list } => {
            let points = volterra_sweep(&m_list)?;
            if cfg.output == Some(Output::Json) || cfg.output == Some(Output::Human) {
                let pts: Vec<Value> = points
                    .iter()
                    .map(|p| json!({ "m": p.m, "estimate": p.estimate, "gap_to_4_over_pi": p.gap }))
                    .collect();
                return definite(json!({ "points": pts }));
            }
            let rows = points.iter().map(|p| vec![p.m.to_string(), format!("{:.17e}", p.estimate), format!("{:.17e}", p.gap)]).collect();
            Ok((Report::Table { header: vec!["m", "estimate", "gap_to_4_over_pi"], rows }, Status::Definite))
        }
        Cmd::Lemmas { n } => {
            if n < 2 {
                return Err(Failure("--n must be at least 2".into()));
            }
            let (s, q) = (shift_matrix(n), ones_nilpotent(n));
            let id = CMatrix::identity(n);
            let alternating_sum_is_s = alternating_sum(&q)? == s;
            let inverse_is_exact = &(&id - &s) * &(&id + &q) == id;
            let q_is_contractive_sum = alternating_sum_is_contraction(&q, cfg.tol)?;
            // another unit-superdiagonal nilpotent must fail the contraction test
            let mut other = q.clone();
            other[(0, n - 1)] = Complex64::new(2.0, 0.0);
            let perturbed_rejected = !alternating_sum_is_contraction(&other, cfg.tol)?;
            let v = json!({
                "n": n,
                "alternating_sum_of_q_equals_s": alternating_sum_is_s,
                "one_minus_s_times_one_plus_q_equals_identity": inverse_is_exact,
                "q_alternating_sum_is_contraction": q_is_contractive_sum,
                "perturbed_q_rejected": perturbed_rejected,
            });
            if !(alternating_sum_is_s && inverse_is_exact && q_is_contractive_sum && perturbed_rejected) {
                return Err(Failure(format!("identity check failed: {v}")));
            }
            definite(v)
        }
        Cmd::ServeOracle { matrix } => {
            let oracle = SimulatedOracle::new(&load_matrix(&matrix)?)?;
            let stdin = io::stdin();
            serve_oracle(&oracle, stdin.lock(), io::stdout().lock())?;
            Ok((Report::None, Status::Definite))
        }
    }
}

fn reconstruction_json(oracle: &impl NormOracle, cfg: &Config) -> Result<Value, Failure> {
    let rep = reconstruct_with(oracle, cfg.seed, cfg.samples)?;
    Ok(json!({
        "n": rep.recovered.n(),
        "recovered": raw(&rep.recovered),
        "lambda": complex(rep.lambda),
        "residuals": rep.residuals,
        "query_count": rep.query_count,
        "verification_gap": rep.verification_gap,
    }))
}

fn with_external_oracle<T>(
    cmd: &str,
    n: usize,
    body: impl FnOnce(&LineOracle<BufReader<std::process::ChildStdout>, std::process::ChildStdin>) -> Result<T, Failure>,
) -> Result<T, Failure> {
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(cmd)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .map_err(|e| Failure(format!("cannot start oracle command: {e}")))?;
    let stdin = child.stdin.take().expect("piped stdin");
    let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
    let oracle = LineOracle::new(stdout, stdin, n);
    let result = body(&oracle);
    drop(oracle); // closes the pipe so the oracle can exit
    let status = child.wait().map_err(|e| Failure(format!("oracle command: {e}")))?;
    let value = result?;
    if !status.success() {
        return Err(Failure(format!("oracle command exited with {status}")));
    }
    Ok(value)
}

fn human(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        human(x, indent + 2, out);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {x}");
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{other}");
        }
    }
}

fn depth(v: &Value) -> Option<usize> {
    match v {
        Value::Object(_) => None,
        Value::Array(xs) => xs.iter().try_fold(1, |d, x| Some(d.max(1 + depth(x)?))),
        _ => Some(0),
    }
}

// pretty JSON that keeps numeric vectors and matrix rows on one line
fn pretty(v: &Value, indent: usize, out: &mut String) {
    let inner = " ".repeat(indent + 2);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, x)) in map.iter().enumerate() {
                let _ = write!(out, "{inner}{}: ", Value::String(key.clone()));
                pretty(x, indent + 2, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}}}", " ".repeat(indent));
        }
        Value::Array(xs) if !xs.is_empty() && !matches!(depth(v), Some(d) if d <= 2) => {
            out.push_str("[\n");
            for (k, x) in xs.iter().enumerate() {
                out.push_str(&inner);
                pretty(x, indent + 2, out);
                out.push_str(if k + 1 < xs.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}]", " ".repeat(indent));
        }
        other => {
            let _ = write!(out, "{other}");
        }
    }
}

fn render(report: Report, output: Option<Output>) -> String {
    match report {
        Report::Json(v) if output == Some(Output::Human) => {
            let mut s = String::new();
            human(&v, 0, &mut s);
            s
        }
        Report::Json(v) => {
            let mut s = String::new();
            pretty(&v, 0, &mut s);
            s + "\n"
        }
        Report::Table { header, rows } => {
            let mut s = header.join(",") + "\n";
            for row in rows {
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        }
        Report::None => String::new(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.config.output;
    match run(cli) {
        Ok((report, status)) => {
            let text = render(report, output);
            let mut stdout = io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            match status {
                Status::Definite => ExitCode::SUCCESS,
                Status::Inconclusive => ExitCode::from(2),
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
