//! Text front end: equations over a named basis, tensor text, and element
//! rendering.
//!
//! Grammar (EBNF, whitespace ignored):
//!
//! ```text
//! equation = sum "=" sum ;
//! sum      = signed { ("+" | "-") signed } ;
//! signed   = ("-" | "+") signed | tensor ;
//! tensor   = product [ ("⊗" | "(x)") product ] ;      (* tensor text only *)
//! product  = power { "*" power | power } ;            (* bare juxtaposition only after a number *)
//! power    = primary [ "^" integer ] ;
//! primary  = number | identifier | "(" sum ")" ;
//! number   = integer [ "/" integer ] | integer "." digits ;
//! ```
//!
//! Unary minus binds tighter than `+` and looser than `*`. Identifiers that
//! are basis names denote basis units; the rest are unknowns (`x`, `x1`,
//! ...). Decimal literals are accepted only with float scalars.

mod ast;
mod lexer;

use std::collections::HashMap;

use thiserror::Error;

pub use ast::{parse_equation, parse_expression, parse_tensor_expr, Equation, Expr};
pub use lexer::NumKind;

use crate::algebra::{AlgebraError, AlgebraRef, Element};
use crate::newton::GeneralizedPolynomial;
use crate::scalar::Scalar;
use crate::solvers::{SolveError, SylvesterSystem};
use crate::tensor::{TensorError, TensorOp};

/// Default bound on the total degree of expanded products.
pub const DEFAULT_MAX_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown symbol `{name}` at column {column}")]
    UnknownSymbol { name: String, column: usize },
    #[error("nonlinear term `{0}`")]
    NonlinearTerm(String),
    #[error("degree {degree} exceeds the limit of {max}")]
    DegreeTooHigh { degree: usize, max: usize },
    #[error("{0} is not allowed here")]
    Unexpected(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl ParseError {
    pub(crate) fn syntax(column: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax { column, message: message.into() }
    }
}

/// Whether `name` has the shape of an unknown: `x` or `x` followed by digits.
pub fn is_unknown_name(name: &str) -> bool {
    name.strip_prefix('x').is_some_and(|rest| rest.chars().all(|c| c.is_ascii_digit()))
}

/// Collects the unknowns of a set of equations, ordered `x, x1, x2, ...`.
/// Any other free identifier is an [`ParseError::UnknownSymbol`].
pub fn collect_unknowns(eqs: &[Equation]) -> Result<Vec<String>, ParseError> {
    let mut names: Vec<String> = Vec::new();
    for eq in eqs {
        for (name, column) in eq.lhs.unknowns().into_iter().chain(eq.rhs.unknowns()) {
            if !is_unknown_name(&name) {
                return Err(ParseError::UnknownSymbol { name, column });
            }
            if !names.contains(&name) {
                names.push(name);
            }
        }
    }
    names.sort_by_key(|n| n[1..].parse::<u64>().ok());
    Ok(names)
}

/// `c0 · x_{v1} · c1 · ... · x_{vd} · cd`
#[derive(Clone)]
struct Word<S> {
    coeffs: Vec<Element<S>>,
    vars: Vec<usize>,
}

impl<S: Scalar> Word<S> {
    fn constant(c: Element<S>) -> Self {
        Word { coeffs: vec![c], vars: Vec::new() }
    }

    fn times(&self, other: &Self) -> Option<Self> {
        let mut coeffs = self.coeffs[..self.coeffs.len() - 1].to_vec();
        let joint = self.coeffs.last().unwrap() * &other.coeffs[0];
        if joint.is_zero() {
            return None;
        }
        coeffs.push(joint);
        coeffs.extend_from_slice(&other.coeffs[1..]);
        let mut vars = self.vars.clone();
        vars.extend_from_slice(&other.vars);
        Some(Word { coeffs, vars })
    }

    fn negate(mut self) -> Self {
        self.coeffs[0] = -&self.coeffs[0];
        self
    }

    fn render(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        let push_coeff = |c: &Element<S>, parts: &mut Vec<String>| {
            let one = Element::one(c.algebra());
            if *c != one {
                let s = format_element(c);
                parts.push(if s.contains(' ') { format!("({s})") } else { s });
            }
        };
        push_coeff(&self.coeffs[0], &mut parts);
        for (v, c) in self.vars.iter().zip(&self.coeffs[1..]) {
            parts.push(names[*v].clone());
            push_coeff(c, &mut parts);
        }
        parts.join("*")
    }
}

struct Evaluator<'a, S> {
    alg: &'a AlgebraRef<S>,
    unknowns: &'a [String],
    max_degree: usize,
}

impl<S: Scalar> Evaluator<'_, S> {
    fn literal(&self, text: &str, column: usize) -> Result<Element<S>, ParseError> {
        let s = S::parse_literal(text).map_err(|e| ParseError::syntax(column, e.to_string()))?;
        Ok(Element::scalar(self.alg, s))
    }

    fn multiply(&self, a: &[Word<S>], b: &[Word<S>]) -> Result<Vec<Word<S>>, ParseError> {
        let mut out = Vec::new();
        for u in a {
            for v in b {
                let degree = u.vars.len() + v.vars.len();
                if degree > self.max_degree {
                    return Err(ParseError::DegreeTooHigh { degree, max: self.max_degree });
                }
                out.extend(u.times(v));
            }
        }
        Ok(out)
    }

    fn words(&self, e: &Expr) -> Result<Vec<Word<S>>, ParseError> {
        Ok(match e {
            Expr::Number { text, column, .. } => {
                let c = self.literal(text, *column)?;
                if c.is_zero() {
                    Vec::new()
                } else {
                    vec![Word::constant(c)]
                }
            }
            Expr::Basis { index, .. } => vec![Word::constant(Element::basis(self.alg, *index))],
            Expr::Unknown { name, column } => {
                let v = self
                    .unknowns
                    .iter()
                    .position(|u| u == name)
                    .ok_or_else(|| ParseError::UnknownSymbol { name: name.clone(), column: *column })?;
                let one = Element::one(self.alg);
                vec![Word { coeffs: vec![one.clone(), one], vars: vec![v] }]
            }
            Expr::Neg(inner) => self.words(inner)?.into_iter().map(Word::negate).collect(),
            Expr::Sum(terms) => {
                let mut out: Vec<Word<S>> = Vec::new();
                let mut constant_at: Option<usize> = None;
                for t in terms {
                    for w in self.words(t)? {
                        match (w.vars.is_empty(), constant_at) {
                            (true, Some(at)) => out[at].coeffs[0] = &out[at].coeffs[0] + &w.coeffs[0],
                            (true, None) => {
                                constant_at = Some(out.len());
                                out.push(w);
                            }
                            (false, _) => out.push(w),
                        }
                    }
                }
                if let Some(at) = constant_at.filter(|&at| out[at].coeffs[0].is_zero()) {
                    out.remove(at);
                }
                out
            }
            Expr::Product(factors) => {
                let mut acc = vec![Word::constant(Element::one(self.alg))];
                for f in factors {
                    acc = self.multiply(&acc, &self.words(f)?)?;
                }
                acc
            }
            Expr::Power(base, exp) => {
                let b = self.words(base)?;
                let mut acc = vec![Word::constant(Element::one(self.alg))];
                for _ in 0..*exp {
                    acc = self.multiply(&acc, &b)?;
                }
                acc
            }
            Expr::Tensor(..) => return Err(ParseError::Unexpected("a tensor product")),
        })
    }
}

/// Evaluates a closed expression with the given values for unknowns.
pub fn evaluate<S: Scalar>(
    expr: &Expr,
    alg: &AlgebraRef<S>,
    values: &HashMap<String, Element<S>>,
) -> Result<Element<S>, ParseError> {
    let eval = |e: &Expr| evaluate(e, alg, values);
    Ok(match expr {
        Expr::Number { text, column, .. } => {
            let s = S::parse_literal(text).map_err(|e| ParseError::syntax(*column, e.to_string()))?;
            Element::scalar(alg, s)
        }
        Expr::Basis { index, .. } => Element::basis(alg, *index),
        Expr::Unknown { name, column } => values
            .get(name)
            .cloned()
            .ok_or_else(|| ParseError::UnknownSymbol { name: name.clone(), column: *column })?,
        Expr::Neg(inner) => -eval(inner)?,
        Expr::Sum(terms) => {
            let mut acc = Element::zero(alg);
            for t in terms {
                acc = acc.checked_add(&eval(t)?)?;
            }
            acc
        }
        Expr::Product(factors) => {
            let mut acc = Element::one(alg);
            for f in factors {
                acc = acc.checked_mul(&eval(f)?)?;
            }
            acc
        }
        Expr::Power(base, exp) => {
            let b = eval(base)?;
            let mut acc = Element::one(alg);
            for _ in 0..*exp {
                acc = acc.checked_mul(&b)?;
            }
            acc
        }
        Expr::Tensor(..) => return Err(ParseError::Unexpected("a tensor product")),
    })
}

/// Parses a constant expression such as `1 + j` into an element.
pub fn parse_element<S: Scalar>(text: &str, alg: &AlgebraRef<S>) -> Result<Element<S>, ParseError> {
    let e = parse_expression(text, alg.basis_names())?;
    if let Some((name, column)) = e.unknowns().into_iter().next() {
        return Err(ParseError::UnknownSymbol { name, column });
    }
    evaluate(&e, alg, &HashMap::new())
}

/// Collects linear equations into a Sylvester system over `unknowns`.
pub fn normalize_linear<S: Scalar>(
    eqs: &[Equation],
    unknowns: &[String],
    alg: &AlgebraRef<S>,
) -> Result<SylvesterSystem<S>, ParseError> {
    let ev = Evaluator { alg, unknowns, max_degree: DEFAULT_MAX_DEGREE };
    let mut ops = Vec::with_capacity(eqs.len());
    let mut rhs = Vec::with_capacity(eqs.len());
    for eq in eqs {
        let mut words = ev.words(&eq.lhs)?;
        words.extend(ev.words(&eq.rhs)?.into_iter().map(Word::negate));
        let mut pairs: Vec<Vec<(Element<S>, Element<S>)>> = vec![Vec::new(); unknowns.len()];
        let mut constant = Element::zero(alg);
        for w in words {
            match w.vars.len() {
                0 => constant = constant - &w.coeffs[0],
                1 => pairs[w.vars[0]].push((w.coeffs[0].clone(), w.coeffs[1].clone())),
                _ => return Err(ParseError::NonlinearTerm(w.render(unknowns))),
            }
        }
        let row = pairs
            .iter()
            .map(|p| TensorOp::from_pairs(alg, p))
            .collect::<Result<Vec<_>, _>>()?;
        ops.push(row);
        rhs.push(constant);
    }
    Ok(SylvesterSystem::new(alg, ops, rhs)?)
}

/// Turns `p(x) = target` into a generalized polynomial and its target.
/// Terms in the unknown on the right-hand side move to the left.
pub fn normalize_poly<S: Scalar>(
    eq: &Equation,
    unknown: &str,
    alg: &AlgebraRef<S>,
    max_degree: usize,
) -> Result<(GeneralizedPolynomial<S>, Element<S>), ParseError> {
    let names = [unknown.to_string()];
    let ev = Evaluator { alg, unknowns: &names, max_degree };
    let mut monomials = Vec::new();
    let mut target = Element::zero(alg);
    for w in ev.words(&eq.lhs)? {
        monomials.push(w.coeffs);
    }
    for w in ev.words(&eq.rhs)? {
        if w.vars.is_empty() {
            target = target + &w.coeffs[0];
        } else {
            monomials.push(w.negate().coeffs);
        }
    }
    Ok((GeneralizedPolynomial::new(alg, monomials)?, target))
}

/// Parses tensor text like `(i+j)(x)k + k(x)(j+k)` or `1/4(i⊗j) + 1/2(k⊗k)`.
///
/// The simple tensors as written are kept as display pairs.
pub fn parse_tensor<S: Scalar>(text: &str, alg: &AlgebraRef<S>) -> Result<TensorOp<S>, ParseError> {
    let e = parse_tensor_expr(text, alg.basis_names())?;
    if let Some((name, column)) = e.unknowns().into_iter().next() {
        return Err(ParseError::UnknownSymbol { name, column });
    }
    match tensor_value(&e, alg)? {
        TensorValue::Tensor(t) => Ok(t),
        TensorValue::Element(_) => Err(ParseError::syntax(1, "expected a tensor such as `a(x)b`")),
    }
}

enum TensorValue<S> {
    Element(Element<S>),
    Tensor(TensorOp<S>),
}

fn tensor_value<S: Scalar>(e: &Expr, alg: &AlgebraRef<S>) -> Result<TensorValue<S>, ParseError> {
    let empty = HashMap::new();
    match e {
        Expr::Tensor(a, b) => {
            let a = evaluate(a, alg, &empty)?;
            let b = evaluate(b, alg, &empty)?;
            Ok(TensorValue::Tensor(TensorOp::simple(&a, &b)?))
        }
        Expr::Neg(inner) => Ok(match tensor_value(inner, alg)? {
            TensorValue::Tensor(t) => TensorValue::Tensor(t.scale(&-S::one())),
            TensorValue::Element(x) => TensorValue::Element(-x),
        }),
        Expr::Sum(terms) => {
            let mut acc: Option<TensorOp<S>> = None;
            for t in terms {
                match tensor_value(t, alg)? {
                    TensorValue::Tensor(t) => acc = Some(match acc { Some(a) => a.add(&t)?, None => t }),
                    TensorValue::Element(_) => return Err(ParseError::Unexpected("adding an element to a tensor")),
                }
            }
            Ok(TensorValue::Tensor(acc.expect("sums are nonempty")))
        }
        Expr::Product(factors) if factors.iter().any(contains_tensor) => {
            // scalar coefficient times a parenthesized tensor, e.g. 1/4(i⊗j)
            let mut scalar = S::one();
            let mut tensor = None;
            for f in factors {
                match tensor_value(f, alg)? {
                    TensorValue::Element(x) if x.is_scalar() => scalar = scalar * x.coords()[0].clone(),
                    TensorValue::Tensor(t) if tensor.is_none() => tensor = Some(t),
                    _ => return Err(ParseError::Unexpected("this product of a tensor")),
                }
            }
            Ok(TensorValue::Tensor(tensor.expect("product contains a tensor").scale(&scalar)))
        }
        other => Ok(TensorValue::Element(evaluate(other, alg, &empty)?)),
    }
}

fn contains_tensor(e: &Expr) -> bool {
    match e {
        Expr::Tensor(..) => true,
        Expr::Neg(e) | Expr::Power(e, _) => contains_tensor(e),
        Expr::Sum(v) | Expr::Product(v) => v.iter().any(contains_tensor),
        _ => false,
    }
}

/// Canonical text for an element, e.g. `-1/2 - 1/2j`. The unit's name is
/// omitted, zero terms dropped, and the zero element renders as `0`.
pub fn format_element<S: Scalar>(x: &Element<S>) -> String {
    format_coords(x.coords(), x.algebra().basis_names(), |s| s.to_string())
}

/// Like [`format_element`] with a custom rendering of coefficient magnitudes.
pub fn format_element_with<S: Scalar>(x: &Element<S>, render: impl Fn(&S) -> String) -> String {
    format_coords(x.coords(), x.algebra().basis_names(), render)
}

fn format_coords<S: Scalar>(coords: &[S], names: &[String], render: impl Fn(&S) -> String) -> String {
    let mut out = String::new();
    for (k, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        match (out.is_empty(), c.is_negative()) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        if k == 0 {
            out.push_str(&render(&mag));
        } else if mag.is_one() {
            out.push_str(&names[k]);
        } else {
            out.push_str(&render(&mag));
            out.push_str(&names[k]);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
