//! `z2kit`: decompose integer involutions, resolve presented groups with an
//! order-two automorphism, and evaluate or verify `M_r ⊗ O_n` expressions.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 invalid mathematical
//! input, 3 verification failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use z2kit::exactla::{f2_rank, kernel_basis, F2Matrix, IntMatrix};
use z2kit::report::Report;
use z2kit::resolve::{certificate, verify_certificate, Presentation, ResolveError};
use z2kit::staralg::{
    example5, is_blank, verify_involutive, verify_relations, GeneratorMap, GeneratorMapFile, StarAlgebra,
    StarError, DEFAULT_TERM_CAP,
};
use z2kit::z2mod::{decompose_with_seed, multiplicities, verify_decomposition, Involution, Z2Error};

#[derive(Parser, Debug)]
#[command(name = "z2kit", version, about = "Exact tools for Z[Z/2]-modules and M_r ⊗ O_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Seed for the randomized fallback of the decomposition.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Abort normalization past this many terms.
    #[arg(long, default_value_t = DEFAULT_TERM_CAP, global = true)]
    term_cap: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multiplicities (n1, n2, n3) of an involution and the counting identities.
    Multiplicities { matrix: PathBuf },
    /// Change of basis to canonical block form.
    Decompose { matrix: PathBuf },
    /// Free cover, kernel and summand tuples of a presented group.
    Resolve { presentation: PathBuf },
    /// Normal form of every expression in a file (one per line).
    StarEval {
        expressions: PathBuf,
        /// Matrix size r of M_r.
        #[arg(long, default_value_t = 3)]
        matrix_size: usize,
        /// Number n of Cuntz isometries.
        #[arg(long, default_value_t = 4)]
        cuntz_index: usize,
    },
    /// Check that a generator table defines an order-two automorphism.
    VerifyHom {
        /// A map file, or `example5` for the built-in table.
        map: String,
        /// Apply a mutation to the table first (swap-v<a>-v<b>, drop:<key>, zero:<key>, negate:<key>).
        #[arg(long)]
        mutate: Option<String>,
    },
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn math(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Z2Error> for Failure {
    fn from(e: Z2Error) -> Self {
        Failure::math(e.to_string())
    }
}

impl From<ResolveError> for Failure {
    fn from(e: ResolveError) -> Self {
        Failure::math(e.to_string())
    }
}

impl From<StarError> for Failure {
    fn from(e: StarError) -> Self {
        match e {
            StarError::Syntax { .. } | StarError::Map(_) => Failure::io(e.to_string()),
            _ => Failure::math(e.to_string()),
        }
    }
}

/// Command output plus whether its verification passed.
struct Outcome {
    text: String,
    verified: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Multiplicities { matrix } => cmd_multiplicities(cli, matrix),
        Command::Decompose { matrix } => cmd_decompose(cli, matrix),
        Command::Resolve { presentation } => cmd_resolve(cli, presentation),
        Command::StarEval { expressions, matrix_size, cuntz_index } => {
            cmd_star_eval(cli, expressions, *matrix_size, *cuntz_index)
        }
        Command::VerifyHom { map, mutate } => cmd_verify_hom(cli, map, mutate.as_deref()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::io(format!("cannot parse {}: {e}", path.display())))
}

/// Matrix file: the shared `{"rows", "cols", "entries"}` object, or a bare
/// array of rows.
#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Object(IntMatrix),
    Rows(Vec<Vec<i64>>),
}

fn read_matrix(path: &Path) -> Result<IntMatrix, Failure> {
    match read_json::<MatrixFile>(path)? {
        MatrixFile::Object(m) => Ok(m),
        MatrixFile::Rows(rows) => {
            let cols = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|r| r.len() != cols) {
                return Err(Failure::io(format!("{}: rows have different lengths", path.display())));
            }
            Ok(IntMatrix::from_rows(&rows))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct MultiplicitiesOut {
    n: usize,
    n1: usize,
    n2: usize,
    n3: usize,
    trace: String,
    rank_fixed: usize,
    rank_negated: usize,
    rank_f2_one_plus_s: usize,
    identities_hold: bool,
}

fn cmd_multiplicities(cli: &Cli, path: &Path) -> Result<Outcome, Failure> {
    let s = read_matrix(path)?;
    let inv = Involution::new(s.clone())?;
    let m = multiplicities(&inv);
    let n = inv.rank();
    let id = IntMatrix::identity(n);
    let rank_fixed = kernel_basis(&(&s - &id)).cols();
    let rank_negated = kernel_basis(&(&s + &id)).cols();
    let f2 = f2_rank(&F2Matrix::reduce(&(&id + &s)));
    let trace = s.trace();
    let identities_hold = m.rank() == n
        && trace == m.trace().into()
        && m.n1 + m.n3 == rank_fixed
        && m.n2 + m.n3 == rank_negated
        && m.n3 == f2;
    let out = MultiplicitiesOut {
        n,
        n1: m.n1,
        n2: m.n2,
        n3: m.n3,
        trace: trace.to_string(),
        rank_fixed,
        rank_negated,
        rank_f2_one_plus_s: f2,
        identities_hold,
    };
    let text = match cli.format {
        Format::Json => to_json(&out),
        Format::Text => {
            let mut t = format!("{m}\n");
            let _ = writeln!(t, "n1 + n2 + 2*n3 = {} (n = {n})", m.rank());
            let _ = writeln!(t, "n1 - n2 = {} (trace S = {trace})", m.trace());
            let _ = writeln!(t, "n1 + n3 = {} (rank ker(S - I) = {rank_fixed})", m.n1 + m.n3);
            let _ = writeln!(t, "n2 + n3 = {} (rank ker(S + I) = {rank_negated})", m.n2 + m.n3);
            let _ = writeln!(t, "n3 = {} (rank over F2 of I + S = {f2})", m.n3);
            let _ = writeln!(t, "identities: {}", if identities_hold { "hold" } else { "VIOLATED" });
            t
        }
    };
    Ok(Outcome { text, verified: identities_hold })
}

#[derive(Serialize)]
struct DecomposeOut<'a> {
    #[serde(flatten)]
    decomposition: &'a z2kit::z2mod::Decomposition,
    verified: bool,
}

fn cmd_decompose(cli: &Cli, path: &Path) -> Result<Outcome, Failure> {
    let inv = Involution::new(read_matrix(path)?)?;
    let dec = decompose_with_seed(&inv, cli.seed)?;
    let verified = verify_decomposition(&inv, &dec);
    let text = match cli.format {
        Format::Json => to_json(&DecomposeOut { decomposition: &dec, verified }),
        Format::Text => {
            let types: Vec<String> = dec.column_types().iter().map(|t| t.to_string()).collect();
            format!(
                "{}\nP = {}\ncolumn types: {}\nverified: {verified}\n",
                dec.mult,
                dec.p,
                if types.is_empty() { "-".to_string() } else { types.join(" ") }
            )
        }
    };
    Ok(Outcome { text, verified })
}

#[derive(Serialize)]
struct ResolveOut<'a> {
    certificate: &'a z2kit::resolve::ResolutionCertificate,
    verification: &'a Report,
    verified: bool,
}

fn cmd_resolve(cli: &Cli, path: &Path) -> Result<Outcome, Failure> {
    let p: Presentation = read_json(path)?;
    let cert = certificate(&p, cli.seed)?;
    let report = verify_certificate(&p, &cert);
    let verified = report.all_passed();
    let text = match cli.format {
        Format::Json => to_json(&ResolveOut { certificate: &cert, verification: &report, verified }),
        Format::Text => {
            let mut t = format!("{}\n", cert.decomposition.mult);
            let _ = writeln!(t, "tau = {}", cert.cover.tau);
            let _ = writeln!(t, "embedding = {}", cert.embedding);
            let _ = writeln!(t, "kernel involution = {}", cert.kernel);
            for line in &cert.render {
                let _ = writeln!(t, "{line}");
            }
            t.push_str(&report.to_string());
            t
        }
    };
    Ok(Outcome { text, verified })
}

#[derive(Serialize)]
struct EvalLine {
    line: usize,
    input: String,
    normal_form: String,
    terms: usize,
}

fn cmd_star_eval(cli: &Cli, path: &Path, r: usize, n: usize) -> Result<Outcome, Failure> {
    if r < 1 || n < 2 {
        return Err(Failure::math(format!("cannot use M_{r} ⊗ O_{n}: need r ≥ 1 and n ≥ 2")));
    }
    let alg = StarAlgebra::new(r, n).with_term_cap(cli.term_cap);
    let src = read(path)?;
    let mut results = Vec::new();
    for (i, line) in src.lines().enumerate() {
        if is_blank(line) {
            continue;
        }
        let p = alg.parse(line).map_err(|e| {
            let f = Failure::from(e);
            Failure { code: f.code, message: format!("{}:{}: {}", path.display(), i + 1, f.message) }
        })?;
        let input = line.split('#').next().unwrap_or("").trim().to_string();
        results.push(EvalLine { line: i + 1, input, normal_form: p.to_string(), terms: p.len() });
    }
    let text = match cli.format {
        Format::Json => to_json(&results),
        Format::Text => results.iter().map(|l| format!("{}: {}\n", l.line, l.normal_form)).collect(),
    };
    Ok(Outcome { text, verified: true })
}

#[derive(Serialize)]
struct VerifyHomOut<'a> {
    relations: &'a [z2kit::report::Check],
    involutive: &'a [z2kit::report::Check],
    passed: bool,
}

fn cmd_verify_hom(cli: &Cli, source: &str, mutation: Option<&str>) -> Result<Outcome, Failure> {
    let mut map = if source == "example5" {
        example5(cli.term_cap)
    } else {
        let file: GeneratorMapFile = read_json(Path::new(source))?;
        GeneratorMap::from_file(&file, cli.term_cap)?
    };
    if let Some(m) = mutation {
        map = map.mutate(m)?;
    }
    let relations = verify_relations(&map)?;
    let involutive = verify_involutive(&map)?;
    let passed = relations.all_passed() && involutive.all_passed();
    let text = match cli.format {
        Format::Json => to_json(&VerifyHomOut { relations: &relations.checks, involutive: &involutive.checks, passed }),
        Format::Text => {
            let failed = relations.failures().count() + involutive.failures().count();
            let total = relations.checks.len() + involutive.checks.len();
            let summary = if passed {
                format!("all {total} checks passed\n")
            } else {
                format!("{failed} of {total} checks failed\n")
            };
            format!("homomorphism relations:\n{relations}order two on generators:\n{involutive}{summary}")
        }
    };
    Ok(Outcome { text, verified: passed })
}
