//! `reslab`: resistances, modular functionals, and property checks for
//! network energies stored as JSON documents.
//!
//! Exit codes: 0 success (all checks passed for `verify`), 1 failed checks or
//! unexpected errors, 2 parse errors, 3 unknown vertices, 4 solver budget
//! exhausted (the value is still printed, with a warning on stderr), 5
//! dimension mismatches, 6 Orlicz size cap exceeded, 7 precondition
//! violations (Dirichlet operands, mixed exponents, bad parameters).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use reslab::convex::ScalarConvex;
use reslab::forms::NetworkForm;
use reslab::io::{parse_dual_vector, parse_vertex_vector, NetworkFile};
use reslab::resistance::{
    approximating_form, elementary_resistance, luxemburg, orlicz, resistance_matrix, t_resistance,
    MatrixKind, Quantity, ResistanceMatrix,
};
use reslab::solver::{SolveConfig, SolveStatus};
use reslab::verify::{
    all_vertex_triples, check_additivity_identify, check_additivity_resistor,
    check_contraction_compatibility, check_fundamental_inequalities, check_homogeneous_identity,
    check_p_contraction_map, check_sup_approximation, check_triangle, estimate_delta2_nabla2,
    sample_vertex_vectors, VerifyReport, ALL_FAMILIES,
};
use reslab::{Error, ExtNonNeg};

#[derive(Parser)]
#[command(name = "reslab", version, about = "Resistances and functionals of convex network energies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resistance of one vertex pair, or the full matrix
    Resistance(ResistanceArgs),
    /// Modular functionals of a vector against the energy
    Functional(FunctionalArgs),
    /// Property checkers; writes a JSON array of reports
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Elementary,
    T,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct ResistanceArgs {
    /// Network file (JSON)
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = KindArg::Elementary)]
    kind: KindArg,
    /// Tilt parameter; required for --kind t
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// "A,B": print the single value for this ordered pair
    #[arg(long)]
    pair: Option<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative solver tolerance override
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpArg {
    Eval,
    Luxemburg,
    Orlicz,
    Conjugate,
    Approx,
}

#[derive(Args)]
struct FunctionalArgs {
    /// Network file (JSON)
    file: PathBuf,
    #[arg(long, value_enum)]
    op: OpArg,
    /// Vector file: JSON object of per-vertex values
    #[arg(long)]
    vector: PathBuf,
    /// Penalty weight for --op approx
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Penalty vertex labels "A,B,C" for --op approx (default: all vertices)
    #[arg(long)]
    k: Option<String>,
    /// Penalty exponent for --op approx
    #[arg(long, default_value_t = 2.0)]
    p_pen: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    Contraction,
    Triangle,
    Homogeneous,
    Fundamental,
    Doubling,
    PContraction,
    SupApproximation,
    AdditivityIdentify,
    AdditivityResistor,
}

#[derive(Args)]
struct VerifyArgs {
    /// Network file (JSON)
    file: PathBuf,
    /// Checks to run (comma-separated or repeated)
    #[arg(long = "check", value_enum, value_delimiter = ',', required = true)]
    checks: Vec<CheckArg>,
    /// Second operand for the additivity checks
    #[arg(long)]
    file2: Option<PathBuf>,
    /// Gluing label in the first form (additivity)
    #[arg(long)]
    xi1: Option<String>,
    /// Gluing label in the second form (additivity)
    #[arg(long)]
    xi2: Option<String>,
    /// Probe vertex in the first form (additivity)
    #[arg(long)]
    x1: Option<String>,
    /// Probe vertex in the second form (additivity)
    #[arg(long)]
    x2: Option<String>,
    /// Connector conductance for additivity-resistor
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    eps: f64,
    /// Tilt values (repeatable; default 0.25, 1, 4)
    #[arg(long = "t", allow_negative_numbers = true)]
    t_values: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample count for the contraction checkers
    #[arg(long, default_value_t = 400)]
    samples: usize,
    /// Sampled vectors for the functional checkers
    #[arg(long, default_value_t = 20)]
    vector_samples: usize,
    /// Homogeneity exponent (default: inferred from the edge terms)
    #[arg(long)]
    p: Option<f64>,
    /// Penalty weights for sup-approximation (comma-separated, increasing).
    /// The closing gap scales like 1/alpha_max, so the last weight must be
    /// large against 1/tol.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 100.0, 1e4, 1e6])]
    alphas: Vec<f64>,
    /// Check tolerance (violations are relative to 1 + |rhs|)
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::UnknownVertex(_) => 3,
        Error::DimensionMismatch { .. } => 5,
        Error::TooLarge { .. } => 6,
        Error::DirichletOperand(_)
        | Error::MixedExponents(_)
        | Error::NonPositiveT(_)
        | Error::NonPositiveEpsilon(_)
        | Error::NonPositiveAlpha(_)
        | Error::ConstructionError(_) => 7,
        _ => 1,
    }
}

fn run(cli: Cli) -> reslab::Result<ExitCode> {
    match cli.command {
        Command::Resistance(args) => cmd_resistance(args),
        Command::Functional(args) => cmd_functional(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn read_file(path: &Path) -> reslab::Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_form(path: &Path) -> reslab::Result<(NetworkFile, NetworkForm)> {
    let file = NetworkFile::parse(&read_file(path)?)?;
    let form = file.to_form()?;
    Ok((file, form))
}

/// Solver settings: CLI tolerance override, then the RESLAB_MAX_ITERS
/// environment variable.
fn solve_config(tol: Option<f64>) -> reslab::Result<SolveConfig> {
    let mut cfg = SolveConfig::default();
    if let Some(t) = tol {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Parse(format!("tolerance must be > 0, got {t}")));
        }
        cfg.tol_rel = t;
    }
    if let Ok(v) = std::env::var("RESLAB_MAX_ITERS") {
        cfg.max_iters = v
            .parse()
            .map_err(|_| Error::Parse(format!("RESLAB_MAX_ITERS must be an integer, got `{v}`")))?;
    }
    Ok(cfg)
}

/// Writes to `--out` (single atomic rename) or stdout. A closed stdout pipe
/// ends the process quietly instead of panicking.
fn emit(out: &Option<PathBuf>, text: &str) -> reslab::Result<()> {
    match out {
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = writeln!(stdout, "{text}") {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    std::process::exit(0);
                }
                return Err(Error::Parse(format!("cannot write to stdout: {e}")));
            }
            Ok(())
        }
        Some(path) => {
            let tmp = path.with_extension("tmp");
            fs::write(&tmp, format!("{text}\n"))
                .and_then(|()| fs::rename(&tmp, path))
                .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
        }
    }
}

fn render_value(v: ExtNonNeg, format: FormatArg) -> String {
    match format {
        FormatArg::Json => serde_json::to_string(&v).expect("values always serialize"),
        FormatArg::Csv => v.to_string(),
    }
}

/// RFC 4180 quoting, applied only when the field needs it.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn matrix_csv(m: &ResistanceMatrix) -> String {
    let mut rows = Vec::with_capacity(m.labels.len() + 1);
    let mut head = vec![String::new()];
    head.extend(m.labels.iter().map(|l| csv_field(l)));
    rows.push(head.join(","));
    for (i, row) in m.entries.iter().enumerate() {
        let mut line = vec![csv_field(&m.labels[i])];
        line.extend(row.iter().enumerate().map(|(j, e)| {
            if i == j {
                "0".to_string()
            } else {
                e.to_string()
            }
        }));
        rows.push(line.join(","));
    }
    rows.join("\n")
}

/// Prints a solved value; budget exhaustion still prints but exits 4.
fn finish_quantity(
    q: &Quantity,
    format: FormatArg,
    out: &Option<PathBuf>,
) -> reslab::Result<ExitCode> {
    emit(out, &render_value(q.value, format))?;
    if q.budget_exhausted() {
        eprintln!("warning: solver budget exhausted after {} iterations; value is best-effort", q.iterations);
        return Ok(ExitCode::from(4));
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_pair(spec: &str) -> reslab::Result<(&str, &str)> {
    spec.split_once(',')
        .map(|(a, b)| (a.trim(), b.trim()))
        .filter(|(a, b)| !a.is_empty() && !b.is_empty())
        .ok_or_else(|| Error::Parse(format!("--pair expects \"A,B\", got `{spec}`")))
}

fn cmd_resistance(args: ResistanceArgs) -> reslab::Result<ExitCode> {
    let (_, form) = load_form(&args.file)?;
    let cfg = solve_config(args.tol)?;
    let kind = match (args.kind, args.t) {
        (KindArg::Elementary, None) => MatrixKind::Elementary,
        (KindArg::Elementary, Some(_)) => {
            return Err(Error::Parse("--t only applies to --kind t".into()))
        }
        (KindArg::T, Some(t)) => MatrixKind::TResistance { t },
        (KindArg::T, None) => return Err(Error::Parse("--kind t requires --t".into())),
    };
    match &args.pair {
        Some(spec) => {
            let (x, y) = parse_pair(spec)?;
            let q = match kind {
                MatrixKind::Elementary => elementary_resistance(&form, x, y, &cfg)?,
                MatrixKind::TResistance { t } => t_resistance(&form, x, y, t, &cfg)?,
            };
            finish_quantity(&q, args.format, &args.out)
        }
        None => {
            let m = resistance_matrix(&form, kind, &cfg)?;
            let text = match args.format {
                FormatArg::Json => {
                    serde_json::to_string_pretty(&m).expect("matrix always serializes")
                }
                FormatArg::Csv => matrix_csv(&m),
            };
            emit(&args.out, &text)?;
            if m.budget_exhausted {
                eprintln!("warning: solver budget exhausted on some entries; values are best-effort");
                return Ok(ExitCode::from(4));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_functional(args: FunctionalArgs) -> reslab::Result<ExitCode> {
    let (_, form) = load_form(&args.file)?;
    let cfg = solve_config(args.tol)?;
    let vector_text = read_file(&args.vector)?;
    let q = match args.op {
        OpArg::Eval => {
            let f = parse_vertex_vector(&form, &vector_text)?;
            let v = form.evaluate(&f)?;
            Quantity { value: v, status: SolveStatus::Converged, iterations: 0 }
        }
        OpArg::Luxemburg => {
            let f = parse_vertex_vector(&form, &vector_text)?;
            luxemburg(&form, &f, &cfg)?
        }
        OpArg::Orlicz => {
            let f = parse_vertex_vector(&form, &vector_text)?;
            orlicz(&form, &f, &cfg)?
        }
        OpArg::Conjugate => {
            let phi = parse_dual_vector(&form, &vector_text)?;
            reslab::resistance::conjugate(&form, &phi, &cfg)?
        }
        OpArg::Approx => {
            let f = parse_vertex_vector(&form, &vector_text)?;
            let alpha = args
                .alpha
                .ok_or_else(|| Error::Parse("--op approx requires --alpha".into()))?;
            let k_owned: Vec<String> = match &args.k {
                Some(spec) => spec.split(',').map(|s| s.trim().to_string()).collect(),
                None => form.vertex_labels().to_vec(),
            };
            let k_set: Vec<&str> = k_owned.iter().map(|s| s.as_str()).collect();
            approximating_form(&form, alpha, &k_set, args.p_pen, &f, &cfg)?
        }
    };
    finish_quantity(&q, args.format, &args.out)
}

/// Single positive exponent of the file's power edges, hyperedges counting
/// as 2; mixed files are caught later by the checker itself.
fn infer_exponent(form: &NetworkForm) -> f64 {
    for e in form.edges() {
        if let ScalarConvex::ScaledPower { c, p } = &e.w {
            if *c > 0.0 {
                return *p;
            }
        }
    }
    2.0
}

fn all_ordered_pairs(form: &NetworkForm) -> Vec<(String, String)> {
    let labels = form.vertex_labels();
    let mut out = Vec::new();
    for x in labels {
        for y in labels {
            if x != y {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    out
}

struct Additivity {
    form2: NetworkForm,
    xi1: String,
    xi2: String,
    x1: String,
    x2: String,
}

fn additivity_inputs(args: &VerifyArgs) -> reslab::Result<Additivity> {
    let file2 = args
        .file2
        .as_ref()
        .ok_or_else(|| Error::Parse("additivity checks require --file2".into()))?;
    let (_, form2) = load_form(file2)?;
    let need = |v: &Option<String>, name: &str| {
        v.clone()
            .ok_or_else(|| Error::Parse(format!("additivity checks require --{name}")))
    };
    Ok(Additivity {
        form2,
        xi1: need(&args.xi1, "xi1")?,
        xi2: need(&args.xi2, "xi2")?,
        x1: need(&args.x1, "x1")?,
        x2: need(&args.x2, "x2")?,
    })
}

fn cmd_verify(args: VerifyArgs) -> reslab::Result<ExitCode> {
    let (file, form) = load_form(&args.file)?;
    let probe = file.negative_probe(&form)?;
    let cfg = solve_config(None)?;
    let t_values = if args.t_values.is_empty() {
        vec![0.25, 1.0, 4.0]
    } else {
        args.t_values.clone()
    };
    let mut reports: Vec<VerifyReport> = Vec::new();
    for &check in &args.checks {
        match check {
            CheckArg::Contraction => {
                let report = match &probe {
                    Some(p) => {
                        check_contraction_compatibility(p, &ALL_FAMILIES, args.samples, args.seed, args.tol)
                    }
                    None => check_contraction_compatibility(
                        &form,
                        &ALL_FAMILIES,
                        args.samples,
                        args.seed,
                        args.tol,
                    ),
                };
                reports.push(report);
            }
            CheckArg::Triangle => {
                let triples = all_vertex_triples(&form);
                for &t in &t_values {
                    reports.push(check_triangle(&form, t, &triples, &cfg, args.tol)?);
                }
            }
            CheckArg::Homogeneous => {
                let p = args.p.unwrap_or_else(|| infer_exponent(&form));
                let pairs = all_ordered_pairs(&form);
                reports.push(check_homogeneous_identity(
                    &form, p, &t_values, &pairs, &cfg, args.tol,
                )?);
            }
            CheckArg::Fundamental => {
                let samples = sample_vertex_vectors(&form, args.vector_samples, args.seed);
                reports.push(check_fundamental_inequalities(&form, &samples, &cfg, args.tol)?);
            }
            CheckArg::Doubling => {
                let samples = sample_vertex_vectors(&form, args.vector_samples, args.seed);
                reports.push(estimate_delta2_nabla2(&form, &samples).report);
            }
            CheckArg::PContraction => {
                let p = args.p.unwrap_or_else(|| infer_exponent(&form));
                reports.push(check_p_contraction_map(
                    &form, p, args.samples, args.seed, args.tol,
                )?);
            }
            CheckArg::SupApproximation => {
                let samples = sample_vertex_vectors(&form, args.vector_samples, args.seed);
                reports.push(check_sup_approximation(
                    &form, &samples, &args.alphas, &cfg, args.tol,
                )?);
            }
            CheckArg::AdditivityIdentify => {
                let add = additivity_inputs(&args)?;
                for &t in &t_values {
                    reports.push(check_additivity_identify(
                        &form, &add.xi1, &add.form2, &add.xi2, &add.x1, &add.x2, t, &cfg, args.tol,
                    )?);
                }
            }
            CheckArg::AdditivityResistor => {
                let add = additivity_inputs(&args)?;
                for &t in &t_values {
                    reports.push(check_additivity_resistor(
                        &form, &add.xi1, &add.form2, &add.xi2, &add.x1, &add.x2, t, args.eps,
                        &cfg, args.tol,
                    )?);
                }
            }
        }
    }
    let text = serde_json::to_string_pretty(&reports).expect("reports always serialize");
    emit(&args.out, &text)?;
    if reports.iter().all(|r| r.passed) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::FAILURE)
    }
}
