//! Command-line front end: document I/O, the bundled example registry,
//! construction, classification, correspondence, search, and the built-in
//! verification suite.
//!
//! Exit codes: 0 success, 2 parse/usage error, 3 mathematical invariant
//! violation. The scalar backend is chosen by `LCK_BACKEND` (`exact`,
//! the default, or `float`); `LCK_TOL` overrides the float tolerance.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lck::construct::{
    build_d4, build_dim, build_gb, classify_dim4, correspondence, Dim4Class, KahlerTriple,
};
use lck::doc::{
    parse_string_matrix, render_report_json, render_report_text, semidirect_basis_names,
    AlgebraDocument, TripleDocument,
};
use lck::error::Error;
use lck::hermitian::standard_structure;
use lck::lie::LieAlgebra;
use lck::scalar::{parse_scalar, render_scalar, set_float_tolerance, Flt, Rat, Scalar};
use lck::search::{search_bilinear, ConstraintSystem};
use lck::verify::{run_suite, SECTION_KEYS};

#[derive(Parser)]
#[command(
    name = "lck",
    version,
    about = "Exact calculator for metric Lie algebras with complex structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExampleName {
    /// One-parameter family member (requires --b)
    Gb,
    /// The rank-one model
    D4,
    /// Block builder in dimension 2n+2 (requires --n)
    Dim,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra document and print its structure report
    Check {
        /// Algebra document (JSON)
        path: PathBuf,
        /// Report format
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        report: ReportFormat,
    },
    /// Emit a bundled example as a document
    Example {
        /// Which example to emit
        name: ExampleName,
        /// Family parameter (rational, e.g. "7/2" or "-2"); gb only
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// Number of blocks (>= 1); dim only
        #[arg(long)]
        n: Option<usize>,
        /// Emit the triple document instead of the product algebra document
        #[arg(long)]
        triple: bool,
        /// Output file (defaults to stdout)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the semidirect product of a plane acting on a base algebra
    Semidirect {
        /// Class parameter (rational)
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Base algebra document (JSON file)
        #[arg(long = "h", value_name = "FILE")]
        h: PathBuf,
        /// Derivation for the first generator: JSON matrix of rational strings, inline or a file path
        #[arg(long)]
        u: String,
        /// Derivation for the second generator: JSON matrix of rational strings, inline or a file path
        #[arg(long)]
        v: String,
        /// Output file (defaults to stdout)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Classify a 4-dimensional triple
    Classify4 {
        /// Triple document (JSON)
        path: PathBuf,
    },
    /// Move a triple to another class parameter along the correspondence
    Correspond {
        /// Target class parameter (rational)
        #[arg(long = "to-c", value_name = "RATIONAL", allow_hyphen_values = true)]
        to_c: String,
        /// Triple document (JSON)
        path: PathBuf,
        /// Output file (defaults to stdout)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for derivation pairs over an abelian base of dimension 2n
    Search {
        /// Half-dimension of the abelian base (>= 1)
        #[arg(long)]
        n: usize,
        /// Class parameter (rational)
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Number of seeded starting points
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Seed for the deterministic sampler
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Numerical acceptance threshold before exact re-verification
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Replay every identity the library guarantees on the bundled corpus
    VerifyPaper {
        /// Run only one check group (section2 … section7)
        #[arg(long, value_name = "SECTION")]
        only: Option<String>,
    },
}

/// CLI-level failures, separated by exit class.
enum Failure {
    /// Bad invocation or unreadable input: exit 2.
    Usage(String),
    /// Library error: exit 2 for parse-class, 3 for invariant-class.
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

type CliResult = Result<ExitCode, Failure>;

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

/// Print to stdout, exiting quietly when the reader has gone away (for
/// example when the output is piped into `head`).
fn emit_stdout(content: &str, trailing_newline: bool) -> Result<(), Failure> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let written = if trailing_newline {
        writeln!(out, "{content}")
    } else {
        write!(out, "{content}")
    }
    .and_then(|()| out.flush());
    match written {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(usage(format!("cannot write to stdout: {e}"))),
    }
}

fn write_out(output: Option<&Path>, content: &str) -> Result<(), Failure> {
    match output {
        None => emit_stdout(content, true),
        Some(path) => {
            let mut text = content.to_string();
            text.push('\n');
            std::fs::write(path, text)
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
        }
    }
}

/// A matrix argument: inline JSON (starts with '[') or a path to a JSON file.
fn read_matrix_arg<S: Scalar>(
    name: &str,
    spec: &str,
    dim: usize,
) -> Result<lck::linalg::Matrix<S>, Failure> {
    let text = if spec.trim_start().starts_with('[') {
        spec.to_string()
    } else {
        read_file(Path::new(spec))?
    };
    let rows: Vec<Vec<String>> = serde_json::from_str(&text)
        .map_err(|e| usage(format!("--{name}: expected a JSON matrix of rational strings: {e}")))?;
    Ok(parse_string_matrix(name, &rows, dim)?)
}

/// Re-validate a rendered document by parsing it back before it is emitted.
fn emit_algebra<S: Scalar>(doc: &AlgebraDocument, output: Option<&Path>) -> Result<(), Failure> {
    let text = doc.to_json_string();
    AlgebraDocument::from_json_str(&text)?.instantiate::<S>()?;
    write_out(output, &text)
}

fn emit_triple<S: Scalar>(doc: &TripleDocument, output: Option<&Path>) -> Result<(), Failure> {
    let text = doc.to_json_string();
    TripleDocument::from_json_str(&text)?.instantiate::<S>()?;
    write_out(output, &text)
}

fn product_document<S: Scalar>(t: &KahlerTriple<S>) -> Result<AlgebraDocument, Failure> {
    let (alg, herm) = t.semidirect()?;
    Ok(AlgebraDocument::from_instance(
        &alg,
        &herm,
        Some(semidirect_basis_names(t.h_alg.dim())),
    ))
}

fn cmd_check<S: Scalar>(path: &Path, format: ReportFormat) -> CliResult {
    let text = read_file(path)?;
    let doc = AlgebraDocument::from_json_str(&text)?;
    let (alg, herm) = doc.instantiate::<S>()?;
    let report = lck::analysis::structural_theorem_suite(&alg, &herm)?;
    match format {
        ReportFormat::Text => emit_stdout(&render_report_text(&report), false)?,
        ReportFormat::Json => emit_stdout(
            &serde_json::to_string_pretty(&render_report_json(&report))
                .expect("report serializes"),
            true,
        )?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_example<S: Scalar>(
    name: ExampleName,
    b: Option<&str>,
    n: Option<usize>,
    triple: bool,
    output: Option<&Path>,
) -> CliResult {
    let t: KahlerTriple<S> = match name {
        ExampleName::Gb => {
            if n.is_some() {
                return Err(usage("--n is not accepted by 'example gb'"));
            }
            let b = b.ok_or_else(|| usage("'example gb' requires --b <rational>"))?;
            build_gb(&parse_scalar::<S>(b)?)
        }
        ExampleName::D4 => {
            if b.is_some() || n.is_some() {
                return Err(usage("'example d4' takes no parameters"));
            }
            build_d4()
        }
        ExampleName::Dim => {
            if b.is_some() {
                return Err(usage("--b is not accepted by 'example dim'"));
            }
            let n = n.ok_or_else(|| usage("'example dim' requires --n <blocks>"))?;
            if n == 0 {
                return Err(usage("'example dim' requires --n >= 1"));
            }
            build_dim(n)?
        }
    };
    if triple {
        emit_triple::<S>(&TripleDocument::from_triple(&t, None), output)?;
    } else {
        emit_algebra::<S>(&product_document(&t)?, output)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_semidirect<S: Scalar>(
    c: &str,
    h_path: &Path,
    u_spec: &str,
    v_spec: &str,
    output: Option<&Path>,
) -> CliResult {
    let h_doc = AlgebraDocument::from_json_str(&read_file(h_path)?)?;
    let (h_alg, h_herm) = h_doc.instantiate::<S>()?;
    let dim = h_alg.dim();
    let u = read_matrix_arg::<S>("u", u_spec, dim)?;
    let v = read_matrix_arg::<S>("v", v_spec, dim)?;
    let c = parse_scalar::<S>(c)?;
    let t = KahlerTriple::new(h_alg, h_herm, u, v, c)?;
    emit_algebra::<S>(&product_document(&t)?, output)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify4<S: Scalar>(path: &Path) -> CliResult {
    let doc = TripleDocument::from_json_str(&read_file(path)?)?;
    let t = doc.instantiate::<S>()?;
    let verdict = classify_dim4(&t)?;
    match verdict.class {
        Dim4Class::D4 => println!("D4"),
        Dim4Class::FamilyGb(b) => println!("gb b={}", render_scalar(&b)),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_correspond<S: Scalar>(to_c: &str, path: &Path, output: Option<&Path>) -> CliResult {
    let doc = TripleDocument::from_json_str(&read_file(path)?)?;
    let t = doc.instantiate::<S>()?;
    let target = parse_scalar::<S>(to_c)?;
    let moved = correspondence(&t, &target)?;
    emit_triple::<S>(&TripleDocument::from_triple(&moved, None), output)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_search<S: Scalar>(n: usize, c: &str, samples: usize, seed: u64, tol: f64) -> CliResult {
    if n == 0 {
        return Err(usage("'search' requires --n >= 1"));
    }
    let c = parse_scalar::<S>(c)?;
    let sys = ConstraintSystem::new(LieAlgebra::abelian(2 * n), standard_structure(2 * n), c)?;
    let outcome = search_bilinear(&sys, samples, seed, tol)?;
    let triples: Vec<serde_json::Value> = outcome
        .triples
        .iter()
        .map(|t| {
            serde_json::to_value(TripleDocument::from_triple(t, None)).expect("document serializes")
        })
        .collect();
    let payload = serde_json::json!({
        "space_dim": outcome.space_dim,
        "samples": outcome.samples,
        "count": triples.len(),
        "triples": triples,
    });
    emit_stdout(
        &serde_json::to_string_pretty(&payload).expect("payload serializes"),
        true,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify_paper<S: Scalar>(only: Option<&str>) -> CliResult {
    if let Some(o) = only {
        if !SECTION_KEYS.contains(&o) {
            return Err(usage(format!(
                "unknown section '{o}'; valid keys: {}",
                SECTION_KEYS.join(", ")
            )));
        }
    }
    let report = run_suite::<S>(only)?;
    emit_stdout(&report.render(), false)?;
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(3))
    }
}

fn run<S: Scalar>(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Check { path, report } => cmd_check::<S>(path, *report),
        Command::Example {
            name,
            b,
            n,
            triple,
            output,
        } => cmd_example::<S>(*name, b.as_deref(), *n, *triple, output.as_deref()),
        Command::Semidirect { c, h, u, v, output } => {
            cmd_semidirect::<S>(c, h, u, v, output.as_deref())
        }
        Command::Classify4 { path } => cmd_classify4::<S>(path),
        Command::Correspond { to_c, path, output } => {
            cmd_correspond::<S>(to_c, path, output.as_deref())
        }
        Command::Search {
            n,
            c,
            samples,
            seed,
            tol,
        } => cmd_search::<S>(*n, c, *samples, *seed, *tol),
        Command::VerifyPaper { only } => cmd_verify_paper::<S>(only.as_deref()),
    }
}

enum Backend {
    Exact,
    Float,
}

fn backend_from_env() -> Result<Backend, Failure> {
    let backend = match std::env::var("LCK_BACKEND") {
        Err(_) => Backend::Exact,
        Ok(s) => match s.as_str() {
            "exact" => Backend::Exact,
            "float" => Backend::Float,
            other => {
                return Err(usage(format!(
                    "LCK_BACKEND must be 'exact' or 'float', got '{other}'"
                )))
            }
        },
    };
    if let (Backend::Float, Ok(text)) = (&backend, std::env::var("LCK_TOL")) {
        let tol: f64 = text
            .parse()
            .map_err(|e| usage(format!("LCK_TOL must be a float: {e}")))?;
        if !(tol.is_finite() && tol > 0.0) {
            return Err(usage("LCK_TOL must be a positive finite float"));
        }
        set_float_tolerance(tol);
    }
    Ok(backend)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = backend_from_env().and_then(|backend| match backend {
        Backend::Exact => run::<Rat>(&cli),
        Backend::Float => run::<Flt>(&cli),
    });
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            if e.is_parse_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
