//! The `ncalg` command line.
//!
//! ```text
//! ncalg solve [--method auto|field|richardson] "(i+j)*x*k + k*x*(j+k) = 1+k"
//! ncalg newton --x0 "1+j" "x^2 - i*x - x*j + k = 0"
//! ncalg invert-tensor "(i+j)(x)k + k(x)(j+k)"
//! ncalg check --x "-1/2 - 1/2j" "(i+j)*x*k + k*x*(j+k) = 1+k"
//! ```
//!
//! Exit status: 0 solved, 1 no solution / singular / diverged / methods
//! disagree, 2 usage or input error.

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{quaternion_algebra, AlgebraRef, Element};
use crate::io::{
    algebra_from_json, element_to_json, polynomial_from_json, system_from_json, tensor_from_json, tensor_to_json,
    trace_to_json,
};
use crate::newton::{newton_solve, NewtonConfig, NewtonStatus};
use crate::parser::{
    collect_unknowns, evaluate, format_element, format_element_with, is_unknown_name, normalize_linear, normalize_poly,
    parse_element, parse_equation, parse_tensor, DEFAULT_MAX_DEGREE,
};
use crate::scalar::{Rational, Scalar};
use crate::solvers::{
    solve_field, solve_richardson_with, AlgebraSolution, AlgebraSolutionKind, Engine, Layout, RichardsonOptions,
    SolveError, SylvesterSystem,
};
use crate::tensor::TensorError;

#[derive(Debug, Parser)]
#[command(name = "ncalg", version, about = "Equations over finite-dimensional associative algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve linear equations such as `(i+j)*x*k + k*x*(j+k) = 1+k`.
    Solve(SolveArgs),
    /// Run Newton's method on a polynomial equation in `x`.
    Newton(NewtonArgs),
    /// Invert a tensor such as `(i+j)(x)k + k(x)(j+k)`.
    InvertTensor(InvertArgs),
    /// Substitute values for the unknowns and print the residuals.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// `quaternion` or the path of an algebra JSON file.
    #[arg(long, default_value = "quaternion")]
    algebra: String,
    #[arg(long, value_enum)]
    scalar: Option<ScalarArg>,
    #[arg(long, value_enum, default_value_t = OutputArg::Text)]
    output: OutputArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScalarArg {
    Rational,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Field,
    Richardson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Elimination,
    Quasideterminant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LayoutArg {
    Rows,
    Columns,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Engine for the enlarged system.
    #[arg(long, value_enum, default_value_t = EngineArg::Elimination)]
    engine: EngineArg,
    /// Layout of the enlarged matrix.
    #[arg(long, value_enum, default_value_t = LayoutArg::Rows)]
    layout: LayoutArg,
    /// Read the system from a JSON file instead of equation text.
    #[arg(long)]
    system: Option<PathBuf>,
    /// One or more equations.
    #[arg(allow_hyphen_values = true)]
    equations: Vec<String>,
}

#[derive(Debug, Args)]
struct NewtonArgs {
    #[command(flatten)]
    common: Common,
    /// Starting point.
    #[arg(long, allow_hyphen_values = true)]
    x0: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 50)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e12)]
    divergence_factor: f64,
    /// Read the polynomial from a JSON file instead of equation text.
    #[arg(long)]
    polynomial: Option<PathBuf>,
    #[arg(allow_hyphen_values = true)]
    equation: Option<String>,
}

#[derive(Debug, Args)]
struct InvertArgs {
    #[command(flatten)]
    common: Common,
    /// Read the tensor from a JSON file instead of text.
    #[arg(long)]
    tensor_file: Option<PathBuf>,
    #[arg(allow_hyphen_values = true)]
    tensor: Option<String>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    common: Common,
    /// Value for an unknown, `value` or `name=value`; repeat for several.
    #[arg(long = "x", required = true, allow_hyphen_values = true)]
    values: Vec<String>,
    #[arg(allow_hyphen_values = true)]
    equations: Vec<String>,
}

/// Raised for bad input; maps to exit status 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<i32, UsageError>;

/// Runs the command line with `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let float_default = matches!(cli.command, Command::Newton(_));
    let common = match &cli.command {
        Command::Solve(a) => &a.common,
        Command::Newton(a) => &a.common,
        Command::InvertTensor(a) => &a.common,
        Command::Check(a) => &a.common,
    };
    let float = match common.scalar {
        Some(ScalarArg::Float) => true,
        Some(ScalarArg::Rational) => false,
        None => float_default,
    };
    let result = if float { dispatch::<f64>(&cli.command, out) } else { dispatch::<Rational>(&cli.command, out) };
    match result {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch<S: Scalar>(command: &Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Solve(a) => solve_cmd::<S>(a, out),
        Command::Newton(a) => newton_cmd::<S>(a, out),
        Command::InvertTensor(a) => invert_cmd::<S>(a, out),
        Command::Check(a) => check_cmd::<S>(a, out),
    }
}

fn load_algebra<S: Scalar>(spec: &str) -> Result<AlgebraRef<S>, UsageError> {
    if spec == "quaternion" {
        return Ok(quaternion_algebra());
    }
    let text = std::fs::read_to_string(spec).map_err(|e| UsageError(format!("cannot read algebra `{spec}`: {e}")))?;
    Ok(algebra_from_json(&text)?)
}

fn read_file(path: &PathBuf) -> Result<String, UsageError> {
    std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))
}

/// Element text for people: exact values as fractions, floats rounded.
fn show<S: Scalar>(x: &Element<S>) -> String {
    if S::is_exact() {
        format_element(x)
    } else {
        format_element_with(x, |v| {
            let f = v.to_f64();
            if f >= 1e-4 || f == 0.0 {
                let s = format!("{f:.6}");
                s.trim_end_matches('0').trim_end_matches('.').to_string()
            } else {
                format!("{f:.4e}")
            }
        })
    }
}

fn wrap(s: String) -> String {
    if s.contains(' ') || s.starts_with('-') {
        format!("({s})")
    } else {
        s
    }
}

fn emit(out: &mut dyn Write, value: &Value) -> Result<(), UsageError> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn solution_json<S: Scalar>(sol: &AlgebraSolution<S>) -> Value {
    json!({
        "status": sol.kind.to_string(),
        "solution": sol.x.iter().map(element_to_json).collect::<Vec<_>>(),
        "free": sol
            .free_names
            .iter()
            .zip(&sol.nullspace)
            .map(|(name, dir)| json!({ "name": name, "direction": dir.iter().map(element_to_json).collect::<Vec<_>>() }))
            .collect::<Vec<_>>(),
        "residual_norm": sol.residual_norm(),
    })
}

fn write_solution<S: Scalar>(out: &mut dyn Write, names: &[String], sol: &AlgebraSolution<S>) -> std::io::Result<()> {
    match sol.kind {
        AlgebraSolutionKind::Inconsistent => writeln!(out, "inconsistent: the system has no solution"),
        AlgebraSolutionKind::Unique => {
            for (name, x) in names.iter().zip(&sol.x) {
                writeln!(out, "{name} = {}", show(x))?;
            }
            Ok(())
        }
        AlgebraSolutionKind::Parametric => {
            writeln!(out, "parametric: {} free scalar parameter(s) {}", sol.free_names.len(), sol.free_names.join(", "))?;
            for (j, name) in names.iter().enumerate() {
                let mut line = format!("{name} = {}", show(&sol.x[j]));
                for (p, dir) in sol.free_names.iter().zip(&sol.nullspace) {
                    if !dir[j].is_zero() {
                        line.push_str(&format!(" + {p}*{}", wrap(show(&dir[j]))));
                    }
                }
                writeln!(out, "{line}")?;
            }
            Ok(())
        }
        AlgebraSolutionKind::UnverifiedEnlarged => {
            writeln!(out, "unverified: the enlarged system's candidate does not satisfy the equations")?;
            for (name, x) in names.iter().zip(&sol.x) {
                writeln!(out, "candidate {name} = {}", show(x))?;
            }
            writeln!(out, "residual norm = {:.3e}", sol.residual_norm())
        }
    }
}

fn agrees<S: Scalar>(a: &AlgebraSolution<S>, b: &AlgebraSolution<S>) -> bool {
    a.kind == b.kind && (a.kind != AlgebraSolutionKind::Unique || a.x == b.x)
}

fn solve_code<S: Scalar>(sol: &AlgebraSolution<S>) -> i32 {
    if sol.is_solved() {
        0
    } else {
        1
    }
}

fn solve_cmd<S: Scalar>(args: &SolveArgs, out: &mut dyn Write) -> CmdResult {
    let alg = load_algebra::<S>(&args.common.algebra)?;
    let (system, names): (SylvesterSystem<S>, Vec<String>) = match &args.system {
        Some(path) => {
            if !args.equations.is_empty() {
                return Err(UsageError("give either --system or equation text, not both".into()));
            }
            let sys = system_from_json(&read_file(path)?, &alg)?;
            let names = if sys.m_unk() == 1 { vec!["x".into()] } else { (1..=sys.m_unk()).map(|j| format!("x{j}")).collect() };
            (sys, names)
        }
        None => {
            if args.equations.is_empty() {
                return Err(UsageError("no equation given".into()));
            }
            let eqs = args
                .equations
                .iter()
                .map(|t| parse_equation(t, alg.basis_names()))
                .collect::<Result<Vec<_>, _>>()?;
            let names = collect_unknowns(&eqs)?;
            if names.is_empty() {
                return Err(UsageError("the equations contain no unknowns".into()));
            }
            (normalize_linear(&eqs, &names, &alg)?, names)
        }
    };
    let opts = RichardsonOptions {
        engine: match args.engine {
            EngineArg::Elimination => Engine::Elimination,
            EngineArg::Quasideterminant => Engine::Quasideterminant,
        },
        layout: match args.layout {
            LayoutArg::Rows => Layout::EquationRows,
            LayoutArg::Columns => Layout::EquationColumns,
        },
        ..Default::default()
    };
    let richardson = |system: &SylvesterSystem<S>| match solve_richardson_with(system, &opts) {
        Err(SolveError::PivotNotInvertible(p)) => {
            Err(format!("the enlarged system needs a division algebra: pivot {p} is not invertible"))
        }
        other => other.map_err(|e| e.to_string()),
    };
    let json = args.common.output == OutputArg::Json;

    match args.method {
        MethodArg::Field | MethodArg::Richardson => {
            let (method, sol) = if args.method == MethodArg::Field {
                ("field", solve_field(&system))
            } else {
                ("richardson", richardson(&system).map_err(UsageError)?)
            };
            if json {
                let mut v = solution_json(&sol);
                v["method"] = json!(method);
                v["cross_check"] = Value::Null;
                emit(out, &v)?;
            } else {
                write_solution(out, &names, &sol)?;
            }
            Ok(solve_code(&sol))
        }
        MethodArg::Auto => {
            let field = solve_field(&system);
            let check = if S::is_exact() { Some(richardson(&system)) } else { None };
            let disagree = matches!(&check, Some(Ok(r)) if !agrees(&field, r));
            let code = if disagree { 1 } else { solve_code(&field) };
            if json {
                let mut v = solution_json(&field);
                v["method"] = json!("field");
                v["cross_check"] = match &check {
                    None => Value::Null,
                    Some(Ok(r)) => {
                        let mut c = solution_json(r);
                        c["method"] = json!("richardson");
                        c["agrees"] = json!(!disagree);
                        c
                    }
                    Some(Err(msg)) => json!({ "method": "richardson", "skipped": msg }),
                };
                if disagree {
                    v["status"] = json!("disagreement");
                }
                emit(out, &v)?;
            } else {
                write_solution(out, &names, &field)?;
                match &check {
                    None => {}
                    Some(Ok(_)) if !disagree => writeln!(out, "cross-check (richardson): agrees")?,
                    Some(Ok(r)) => {
                        writeln!(out, "methods disagree; the enlarged system gives:")?;
                        write_solution(out, &names, r)?;
                    }
                    Some(Err(msg)) => writeln!(out, "cross-check (richardson): skipped: {msg}")?,
                }
            }
            Ok(code)
        }
    }
}

fn newton_cmd<S: Scalar>(args: &NewtonArgs, out: &mut dyn Write) -> CmdResult {
    let alg = load_algebra::<S>(&args.common.algebra)?;
    let (poly, target) = match (&args.polynomial, &args.equation) {
        (Some(path), None) => polynomial_from_json(&read_file(path)?, &alg)?,
        (None, Some(text)) => {
            let eq = parse_equation(text, alg.basis_names())?;
            let names = collect_unknowns(std::slice::from_ref(&eq))?;
            let unknown = match names.as_slice() {
                [one] => one.clone(),
                [] => "x".to_string(),
                _ => return Err(UsageError("newton takes an equation in a single unknown".into())),
            };
            normalize_poly(&eq, &unknown, &alg, DEFAULT_MAX_DEGREE)?
        }
        _ => return Err(UsageError("give either --polynomial or one equation".into())),
    };
    if !(args.tol > 0.0) {
        return Err(UsageError("--tol must be positive".into()));
    }
    let x0 = parse_element(&args.x0, &alg)?;
    let cfg = NewtonConfig { tol: args.tol, max_iter: args.max_iter, divergence_factor: args.divergence_factor };
    let trace = newton_solve(&poly, &target, &x0, &cfg)?;
    let last = trace.last();
    if args.common.output == OutputArg::Json {
        emit(
            out,
            &json!({
                "status": trace.status.to_string(),
                "solution": [element_to_json(&last.x)],
                "free": [],
                "residual_norm": last.residual_norm,
                "trace": trace_to_json(&trace),
            }),
        )?;
    } else {
        for it in &trace.iterates {
            writeln!(out, "x{} = {}    |f - a| = {:.3e}", it.k, show(&it.x), it.residual_norm)?;
        }
        writeln!(out, "status: {} after {} step(s)", trace.status, trace.steps())?;
        writeln!(out, "x = {}", show(&last.x))?;
    }
    Ok(if trace.status == NewtonStatus::Converged { 0 } else { 1 })
}

fn invert_cmd<S: Scalar>(args: &InvertArgs, out: &mut dyn Write) -> CmdResult {
    let alg = load_algebra::<S>(&args.common.algebra)?;
    let f = match (&args.tensor_file, &args.tensor) {
        (Some(path), None) => tensor_from_json(&read_file(path)?, &alg)?,
        (None, Some(text)) => parse_tensor(text, &alg)?,
        _ => return Err(UsageError("give either --tensor-file or tensor text".into())),
    };
    let result = f.invert();
    let json = args.common.output == OutputArg::Json;
    let (status, code) = match &result {
        Ok(_) => ("invertible", 0),
        Err(TensorError::SingularTensor) => ("singular", 1),
        Err(TensorError::OneSidedInverse) => ("one-sided", 1),
        Err(e) => return Err(UsageError(e.to_string())),
    };
    if json {
        let solution = match &result {
            Ok(g) => vec![tensor_to_json(g)],
            Err(_) => Vec::new(),
        };
        emit(out, &json!({ "status": status, "solution": solution, "free": [], "residual_norm": 0.0 }))?;
    } else {
        match &result {
            Ok(g) => {
                writeln!(out, "f = {}", f.pairs_string())?;
                writeln!(out, "g = {g}")?;
            }
            Err(TensorError::SingularTensor) => writeln!(out, "singular: {} has no inverse", f.pairs_string())?,
            Err(_) => writeln!(out, "one-sided: the solution inverts {} on one side only", f.pairs_string())?,
        }
    }
    Ok(code)
}

fn check_cmd<S: Scalar>(args: &CheckArgs, out: &mut dyn Write) -> CmdResult {
    let alg = load_algebra::<S>(&args.common.algebra)?;
    if args.equations.is_empty() {
        return Err(UsageError("no equation given".into()));
    }
    let eqs = args
        .equations
        .iter()
        .map(|t| parse_equation(t, alg.basis_names()))
        .collect::<Result<Vec<_>, _>>()?;
    let names = collect_unknowns(&eqs)?;
    let mut values = HashMap::new();
    for (k, v) in args.values.iter().enumerate() {
        let (name, text) = match v.split_once('=') {
            Some((n, t)) if is_unknown_name(n.trim()) => (n.trim().to_string(), t),
            _ => {
                let name = names.get(k).cloned().ok_or_else(|| UsageError(format!("no unknown for value `{v}`")))?;
                (name, v.as_str())
            }
        };
        values.insert(name, parse_element(text, &alg)?);
    }
    if let Some(missing) = names.iter().find(|n| !values.contains_key(*n)) {
        return Err(UsageError(format!("no value given for `{missing}`")));
    }
    let mut residuals = Vec::new();
    for eq in &eqs {
        let lhs = evaluate(&eq.lhs, &alg, &values)?;
        let rhs = evaluate(&eq.rhs, &alg, &values)?;
        residuals.push(lhs - rhs);
    }
    let scale = 1.0 + values.values().map(Element::norm).fold(0.0, f64::max);
    let satisfied = residuals.iter().all(|r| r.is_negligible(1e-9 * scale));
    let norm = residuals.iter().map(|r| r.norm().powi(2)).sum::<f64>().sqrt();
    if args.common.output == OutputArg::Json {
        let solution: Vec<Value> = names.iter().map(|n| element_to_json(&values[n])).collect();
        emit(
            out,
            &json!({
                "status": if satisfied { "satisfied" } else { "not-satisfied" },
                "solution": solution,
                "free": [],
                "residual_norm": norm,
                "residuals": residuals.iter().map(element_to_json).collect::<Vec<_>>(),
            }),
        )?;
    } else {
        for (k, r) in residuals.iter().enumerate() {
            writeln!(out, "equation {}: residual = {}", k + 1, show(r))?;
        }
        writeln!(out, "{}", if satisfied { "satisfied" } else { "not satisfied" })?;
    }
    Ok(if satisfied { 0 } else { 1 })
}
