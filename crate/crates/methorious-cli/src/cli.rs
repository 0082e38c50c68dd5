//! Command dispatch for the `methorious` binary.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use methorious::expalg::{ExpPoly, Scalar};
use methorious::methfun::{act_combination, hyper_act, solve_bvp, MethoriousHyperfunction};
use methorious::ore::{frac_add, frac_mul, kernel_witness, ore_quadruple};
use methorious::problems::{lift_factorization, BoundaryProblem};
use methorious::umbral::{embed_single, minimal_monomial, regularize, umbral_coefficients};
use methorious::Error;

use crate::json::{self, ProblemSpec, SpecError};
use crate::parse::{self, ParseError};
use crate::render::{self, Format};
use crate::selftest;
use crate::verify;

/// Exit codes per error class.
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;
pub const EXIT_SEARCH: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Plain,
    Json,
    Latex,
}

#[derive(Debug, Parser)]
#[command(
    name = "methorious",
    about = "Exact calculus for linear ordinary boundary problems: Green's operators, \
             the monoid and fraction ring of boundary problems, and methorious functions.",
    version
)]
pub struct Cli {
    /// Output format for results.
    #[arg(long, global = true, value_enum, default_value = "plain")]
    pub format: OutputFormat,
    /// Search bound for umbral coefficients and regularization.
    #[arg(long, global = true, default_value_t = 50)]
    pub bound: u32,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the Green's operator of a regular boundary problem.
    Greens {
        /// Problem in text syntax, e.g. `(D^2, [E[0], E[1]])`.
        problem: Option<String>,
        /// JSON problem specification file ("-" for stdin).
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Solve T u = f with inhomogeneous boundary values.
    Solve {
        problem: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        /// Forcing function.
        #[arg(long, default_value = "0")]
        rhs: String,
        /// Comma-separated boundary values (overrides the file).
        #[arg(long)]
        values: Option<String>,
    },
    /// Multiply two boundary problems.
    Mul { p1: String, p2: String },
    /// Lift a factorization T = T1*T2 of the problem's operator.
    Factor {
        problem: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        t1: String,
        #[arg(long)]
        t2: String,
    },
    /// Embed a boundary problem into a regular one.
    Regularize {
        problem: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Umbral expansion coefficients and minimal monomial of a condition.
    Umbral {
        condition: String,
        /// Number of coefficients to print.
        #[arg(short = 'n', long, default_value_t = 10)]
        count: u32,
    },
    /// Ore quadruple of two regular problems.
    Orequad { p1: String, p2: String },
    /// Product of two methorious operators (left fractions).
    Fracmul { f1: String, f2: String },
    /// Sum of two methorious operators (left fractions).
    Fracadd { f1: String, f2: String },
    /// Bounded kernel-witness search for a combination of problems.
    Kernel {
        combination: String,
        /// Order budget for candidate denominators (default: largest
        /// occurring order plus two).
        #[arg(long)]
        orders: Option<u32>,
    },
    /// Apply a methorious operator to a function.
    Act { fraction: String, expr: String },
    /// Print the fundamental formulae for the given conditions.
    Deltatable { conditions: Vec<String> },
    /// Run the axiom suite on random inputs.
    Selftest {
        #[arg(long, default_value_t = 200)]
        cases: u32,
    },
    /// Numerically cross-check a symbolic solution by quadrature.
    Verify {
        problem: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value = "0")]
        rhs: String,
        #[arg(long)]
        values: Option<String>,
        /// Acceptance threshold for the maximal deviation.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Number of equispaced sample points.
        #[arg(long, default_value_t = 11)]
        points: u32,
    },
}

#[derive(Debug)]
pub enum CliError {
    Parse(ParseError),
    Core(Error),
    Io(String),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Core(Error::SingularProblem) => EXIT_SINGULAR,
            CliError::Core(Error::UnsupportedOperator) => EXIT_UNSUPPORTED,
            CliError::Core(Error::UmbralSearchExceeded) => EXIT_SEARCH,
            _ => 1,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Parse(e) => e.to_string(),
            CliError::Core(e) => e.to_string(),
            CliError::Io(e) => e.clone(),
            CliError::Usage(e) => e.clone(),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::Parse(p) => CliError::Parse(p),
            SpecError::Core(c) => CliError::Core(c),
        }
    }
}

fn read_spec(path: &PathBuf) -> Result<ProblemSpec, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Io(format!("reading stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Io(format!("invalid problem JSON: {e}")))
}

/// Loads a problem from the inline text argument, an inline JSON object,
/// or a JSON file.
fn load_problem(
    problem: &Option<String>,
    file: &Option<PathBuf>,
) -> Result<(BoundaryProblem, Option<Vec<Scalar>>), CliError> {
    match (problem, file) {
        (Some(text), None) => {
            if text.trim_start().starts_with('{') {
                let spec: ProblemSpec = serde_json::from_str(text)
                    .map_err(|e| CliError::Io(format!("invalid problem JSON: {e}")))?;
                Ok(spec.build()?)
            } else {
                Ok((parse::parse_problem(text)?, None))
            }
        }
        (None, Some(path)) => Ok(read_spec(path)?.build()?),
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give either an inline problem or --file, not both".into(),
        )),
        (None, None) => Err(CliError::Usage(
            "missing problem: pass it inline or via --file".into(),
        )),
    }
}

fn parse_values(values: &Option<String>, dim: usize) -> Result<Option<Vec<Scalar>>, CliError> {
    match values {
        None => Ok(None),
        Some(text) => {
            let mut out = Vec::new();
            for part in text.split(',') {
                out.push(parse::parse_scalar(part.trim())?);
            }
            if out.len() != dim {
                return Err(CliError::Core(Error::DimensionMismatch));
            }
            Ok(Some(out))
        }
    }
}

fn parse_diffop(src: &str) -> Result<methorious::problems::DiffOperator, CliError> {
    let op = parse::parse_operator(src)?;
    parse::operator_as_diffop(&op).ok_or_else(|| {
        CliError::Parse(ParseError {
            line: 1,
            column: 1,
            expected: vec!["a monic differential operator".into()],
            found: src.into(),
        })
    })
}

fn text_format(fmt: OutputFormat) -> Format {
    match fmt {
        OutputFormat::Latex => Format::Latex,
        _ => Format::Plain,
    }
}

fn emit(fmt: OutputFormat, plain: String, json_payload: serde_json::Value) {
    match fmt {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&json::document(json_payload)).unwrap())
        }
        _ => println!("{plain}"),
    }
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let fmt = cli.format;
    let tfmt = text_format(fmt);
    let bound = cli.bound;
    match cli.command {
        Command::Greens { problem, file } => {
            let (p, _) = load_problem(&problem, &file)?;
            let g = p.greens_operator()?;
            emit(
                fmt,
                render::operator(&g, tfmt),
                json!({"problem": json::problem_json(&p), "greens": json::operator_json(&g)}),
            );
        }
        Command::Solve { problem, file, rhs, values } => {
            let (p, file_values) = load_problem(&problem, &file)?;
            let f = parse::parse_expr(&rhs)?;
            let vals = parse_values(&values, p.dim())?
                .or(file_values)
                .unwrap_or_else(|| vec![Scalar::zero(); p.dim()]);
            let u = solve_bvp(p.operator(), p.conditions(), &f, &vals)?;
            emit(
                fmt,
                render::expr(&u, tfmt),
                json!({
                    "problem": json::problem_json(&p),
                    "rhs": render::expr(&f, Format::Plain),
                    "values": vals.iter().map(|v| render::scalar(v, Format::Plain)).collect::<Vec<_>>(),
                    "solution": render::expr(&u, Format::Plain),
                }),
            );
        }
        Command::Mul { p1, p2 } => {
            let a = parse::parse_problem(&p1)?;
            let b = parse::parse_problem(&p2)?;
            let prod = a.multiply(&b);
            emit(fmt, render::problem(&prod, tfmt), json!({"product": json::problem_json(&prod)}));
        }
        Command::Factor { problem, file, t1, t2 } => {
            let (p, _) = load_problem(&problem, &file)?;
            let t1 = parse_diffop(&t1)?;
            let t2 = parse_diffop(&t2)?;
            let (f1, f2) = lift_factorization(&p, &t1, &t2)?;
            emit(
                fmt,
                format!("{}\n{}", render::problem(&f1, tfmt), render::problem(&f2, tfmt)),
                json!({
                    "left": json::problem_json(&f1),
                    "right": json::problem_json(&f2),
                }),
            );
        }
        Command::Regularize { problem, file } => {
            let (p, _) = load_problem(&problem, &file)?;
            let r = regularize(&p, bound)?;
            emit(fmt, render::problem(&r, tfmt), json!({"regularized": json::problem_json(&r)}));
        }
        Command::Umbral { condition, count } => {
            let beta = parse::parse_condition(&condition)?;
            let exp = umbral_coefficients(&beta, count);
            let minimal = minimal_monomial(&beta, bound)?;
            let embedded = embed_single(&beta, bound)?;
            let coeff_strings: Vec<String> =
                exp.coefficients().iter().map(|c| render::scalar(c, tfmt)).collect();
            emit(
                fmt,
                format!(
                    "coefficients: [{}]\nminimal monomial: x^{}\nembedding: {}",
                    coeff_strings.join(", "),
                    minimal,
                    render::problem(&embedded, tfmt)
                ),
                json!({
                    "condition": render::condition(&beta, Format::Plain),
                    "coefficients": exp
                        .coefficients()
                        .iter()
                        .map(|c| render::scalar(c, Format::Plain))
                        .collect::<Vec<_>>(),
                    "minimal_monomial": minimal,
                    "embedding": json::problem_json(&embedded),
                }),
            );
        }
        Command::Orequad { p1, p2 } => {
            let a = parse::parse_problem(&p1)?;
            let b = parse::parse_problem(&p2)?;
            let (q1, q2) = ore_quadruple(&a, &b, bound)?;
            let common = q1.multiply(&a);
            emit(
                fmt,
                format!(
                    "q1 = {}\nq2 = {}\ncommon = {}",
                    render::problem(&q1, tfmt),
                    render::problem(&q2, tfmt),
                    render::problem(&common, tfmt)
                ),
                json!({
                    "q1": json::problem_json(&q1),
                    "q2": json::problem_json(&q2),
                    "common": json::problem_json(&common),
                }),
            );
        }
        Command::Fracmul { f1, f2 } => {
            let a = parse::parse_fraction(&f1)?;
            let b = parse::parse_fraction(&f2)?;
            let prod = frac_mul(&a, &b, bound)?;
            emit(fmt, render::fraction(&prod, tfmt), json!({"product": json::fraction_json(&prod)}));
        }
        Command::Fracadd { f1, f2 } => {
            let a = parse::parse_fraction(&f1)?;
            let b = parse::parse_fraction(&f2)?;
            let sum = frac_add(&a, &b, bound)?;
            emit(fmt, render::fraction(&sum, tfmt), json!({"sum": json::fraction_json(&sum)}));
        }
        Command::Kernel { combination, orders } => {
            let r = parse::parse_combination(&combination)?;
            let budget = orders.unwrap_or(r.max_order() + 2);
            match kernel_witness(&r, budget) {
                Some(w) => {
                    let boundary_only =
                        methorious::ore::greens_combination_is_boundary(&r)?;
                    emit(
                        fmt,
                        format!(
                            "witness: {}\ngreens combination in boundary ideal: {}",
                            render::problem(&w, tfmt),
                            boundary_only
                        ),
                        json!({
                            "witness": json::problem_json(&w),
                            "greens_combination_in_boundary_ideal": boundary_only,
                        }),
                    );
                }
                None => {
                    emit(fmt, "NotFound".into(), json!({"witness": null}));
                }
            }
        }
        Command::Act { fraction, expr } => {
            let frac = parse::parse_fraction(&fraction)?;
            let f = parse::parse_expr(&expr)?;
            let m = methorious::methfun::MethoriousFunction::smooth(f);
            let out: MethoriousHyperfunction = if frac.den().is_neutral() {
                MethoriousHyperfunction::plain(act_combination(frac.num(), &m)?)
            } else {
                hyper_act(&frac, &m)?
            };
            emit(
                fmt,
                render::hyperfunction(&out, tfmt),
                json::hyperfunction_json(&out),
            );
        }
        Command::Deltatable { conditions } => {
            if conditions.is_empty() {
                return Err(CliError::Usage("deltatable needs at least one condition".into()));
            }
            let mut lines = Vec::new();
            let mut rows = Vec::new();
            for c in &conditions {
                let beta = parse::parse_condition(c)?;
                let b0 = beta.apply(&ExpPoly::one());
                if b0.is_zero() {
                    let k = minimal_monomial(&beta, bound)?;
                    let p = embed_single(&beta, bound)?;
                    lines.push(format!(
                        "{}: vanishes on 1 (minimal monomial x^{}), embeds into {}",
                        render::condition(&beta, tfmt),
                        k,
                        render::problem(&p, tfmt)
                    ));
                    rows.push(json!({
                        "condition": render::condition(&beta, Format::Plain),
                        "minimal_monomial": k,
                        "embedding": json::problem_json(&p),
                    }));
                    continue;
                }
                let p = BoundaryProblem::new(
                    methorious::problems::DiffOperator::derivation(1),
                    vec![beta.clone()],
                );
                let weight = beta.scale(&b0.inv()?);
                lines.push(format!(
                    "{} * f = D f + ({})(f) * [1 : {}]",
                    render::problem(&p, tfmt),
                    render::condition(&weight, tfmt),
                    render::problem(&p, tfmt)
                ));
                rows.push(json!({
                    "condition": render::condition(&beta, Format::Plain),
                    "problem": json::problem_json(&p),
                    "weight": render::condition(&weight, Format::Plain),
                }));
            }
            emit(fmt, lines.join("\n"), json!({"formulae": rows}));
        }
        Command::Selftest { cases } => {
            let lines = selftest::run(cli.seed, cases);
            let mut all_ok = true;
            let mut texts = Vec::new();
            let mut rows = Vec::new();
            for line in &lines {
                all_ok &= line.ok;
                texts.push(format!(
                    "{}: {} ({} cases)",
                    line.name,
                    if line.ok { "ok" } else { "FAILED" },
                    line.cases
                ));
                rows.push(json!({"name": line.name, "cases": line.cases, "ok": line.ok}));
            }
            emit(fmt, texts.join("\n"), json!({"seed": cli.seed, "suite": rows}));
            if !all_ok {
                return Err(CliError::Io("selftest failed".into()));
            }
        }
        Command::Verify { problem, file, rhs, values, tol, points } => {
            let (p, file_values) = load_problem(&problem, &file)?;
            let f = parse::parse_expr(&rhs)?;
            let vals = parse_values(&values, p.dim())?
                .or(file_values)
                .unwrap_or_else(|| vec![Scalar::zero(); p.dim()]);
            let report = verify::verify_solution(&p, &f, &vals, points, tol)
                .map_err(CliError::Core)?;
            let ok = report.max_deviation < tol;
            let mut texts = Vec::new();
            for s in &report.samples {
                texts.push(format!(
                    "x = {:>5.2}: exact = {:>18.12}, quadrature = {:>18.12}",
                    s.point, s.exact, s.quadrature
                ));
            }
            texts.push(format!(
                "max deviation = {:.3e} ({})",
                report.max_deviation,
                if ok { "ok" } else { "EXCEEDS TOLERANCE" }
            ));
            emit(
                fmt,
                texts.join("\n"),
                json!({
                    "max_deviation": report.max_deviation,
                    "tolerance": tol,
                    "ok": ok,
                    "samples": report
                        .samples
                        .iter()
                        .map(|s| json!({"x": s.point, "exact": s.exact, "quadrature": s.quadrature}))
                        .collect::<Vec<_>>(),
                }),
            );
            if !ok {
                return Err(CliError::Io("verification exceeded tolerance".into()));
            }
        }
    }
    Ok(())
}
