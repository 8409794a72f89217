//! JSON formats for algebras, elements, tensors, systems, polynomials and
//! Newton traces.
//!
//! Scalars are written as strings such as `"-1/2"`; integers and (in float
//! mode) decimal numbers are accepted on input too. An element is an array
//! of its coordinates.
//!
//! ```json
//! {"name": "quaternion", "dim": 4, "basis": ["1", "i", "j", "k"],
//!  "constants": [[["1","0","0","0"], ...], ...]}
//! ```
//!
//! `constants[i][j][k]` is the coefficient of `e_k` in `e_i e_j`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, AlgebraRef, Element};
use crate::linalg::FieldMatrix;
use crate::newton::{GeneralizedPolynomial, NewtonTrace};
use crate::scalar::{Scalar, ScalarParseError};
use crate::solvers::{SolveError, SylvesterSystem};
use crate::tensor::{TensorError, TensorOp};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Scalar(#[from] ScalarParseError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("{0}")]
    Shape(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Text(String),
    Int(i64),
    Float(f64),
}

impl ScalarText {
    pub fn parse<S: Scalar>(&self) -> Result<S, ScalarParseError> {
        match self {
            ScalarText::Text(t) => S::parse_literal(t),
            ScalarText::Int(v) => Ok(S::from_i64(*v)),
            ScalarText::Float(v) => S::parse_literal(&v.to_string()),
        }
    }
}

pub type ElementJson = Vec<ScalarText>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub name: String,
    pub dim: usize,
    #[serde(default)]
    pub basis: Vec<String>,
    pub constants: Vec<Vec<Vec<ScalarText>>>,
}

pub fn algebra_from_json<S: Scalar>(text: &str) -> Result<AlgebraRef<S>, IoError> {
    let file: AlgebraJson = serde_json::from_str(text)?;
    let constants = file
        .constants
        .iter()
        .map(|plane| plane.iter().map(|row| row.iter().map(ScalarText::parse).collect::<Result<Vec<S>, _>>()).collect())
        .collect::<Result<Vec<Vec<Vec<S>>>, _>>()?;
    if constants.len() != file.dim {
        return Err(IoError::Shape(format!("dim is {} but constants has {} planes", file.dim, constants.len())));
    }
    Ok(Algebra::new(&file.name, constants, file.basis)?)
}

pub fn algebra_to_json<S: Scalar>(alg: &Algebra<S>) -> String {
    let file = AlgebraJson {
        name: alg.name().to_string(),
        dim: alg.dim(),
        basis: alg.basis_names().to_vec(),
        constants: alg
            .constants()
            .iter()
            .map(|plane| plane.iter().map(|row| row.iter().map(scalar_text).collect()).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

fn scalar_text<S: Scalar>(s: &S) -> ScalarText {
    ScalarText::Text(s.to_string())
}

pub fn element_from_json<S: Scalar>(coords: &[ScalarText], alg: &AlgebraRef<S>) -> Result<Element<S>, IoError> {
    let coords = coords.iter().map(ScalarText::parse).collect::<Result<Vec<S>, _>>()?;
    Ok(Element::new(alg, coords)?)
}

pub fn element_to_json<S: Scalar>(x: &Element<S>) -> Value {
    Value::Array(x.coords().iter().map(|c| Value::String(c.to_string())).collect())
}

/// `{"pairs": [[a, b], ...]}` or `{"coeff": n×n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TensorJson {
    Pairs { pairs: Vec<(ElementJson, ElementJson)> },
    Coeff { coeff: Vec<Vec<ScalarText>> },
}

pub fn tensor_from_json<S: Scalar>(text: &str, alg: &AlgebraRef<S>) -> Result<TensorOp<S>, IoError> {
    match serde_json::from_str::<TensorJson>(text)? {
        TensorJson::Pairs { pairs } => {
            let pairs = pairs
                .iter()
                .map(|(a, b)| Ok((element_from_json(a, alg)?, element_from_json(b, alg)?)))
                .collect::<Result<Vec<_>, IoError>>()?;
            Ok(TensorOp::from_pairs(alg, &pairs)?)
        }
        TensorJson::Coeff { coeff } => {
            let rows = coeff
                .iter()
                .map(|r| r.iter().map(ScalarText::parse).collect::<Result<Vec<S>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            if rows.iter().any(|r| r.len() != alg.dim()) {
                return Err(TensorError::BadShape { n: alg.dim() }.into());
            }
            Ok(TensorOp::from_coeff(alg, FieldMatrix::from_rows(rows))?)
        }
    }
}

pub fn tensor_to_json<S: Scalar>(t: &TensorOp<S>) -> Value {
    let n = t.algebra().dim();
    let coeff: Vec<Vec<String>> = (0..n).map(|i| (0..n).map(|j| t.coeff()[(i, j)].to_string()).collect()).collect();
    json!({ "coeff": coeff })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub left: ElementJson,
    pub right: ElementJson,
    /// 0-based unknown index.
    pub var: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquationJson {
    pub terms: Vec<TermJson>,
    pub rhs: ElementJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemJson {
    pub unknowns: usize,
    pub equations: Vec<EquationJson>,
}

pub fn system_from_json<S: Scalar>(text: &str, alg: &AlgebraRef<S>) -> Result<SylvesterSystem<S>, IoError> {
    let file: SystemJson = serde_json::from_str(text)?;
    let mut builder = SylvesterSystem::builder(alg, file.unknowns);
    for eq in &file.equations {
        let terms = eq
            .terms
            .iter()
            .map(|t| Ok((element_from_json(&t.left, alg)?, t.var, element_from_json(&t.right, alg)?)))
            .collect::<Result<Vec<_>, IoError>>()?;
        builder = builder.equation(&terms, element_from_json(&eq.rhs, alg)?)?;
    }
    Ok(builder.build()?)
}

/// Writes each block in standard form, one term `e_i x e_j` per nonzero
/// coefficient.
pub fn system_to_json<S: Scalar>(system: &SylvesterSystem<S>) -> String {
    let alg = system.algebra();
    let n = alg.dim();
    let text = |x: &Element<S>| x.coords().iter().map(scalar_text).collect::<Vec<_>>();
    let equations = (0..system.m_eq())
        .map(|i| {
            let mut terms = Vec::new();
            for var in 0..system.m_unk() {
                let f = system.op(i, var).coeff();
                for a in 0..n {
                    for b in 0..n {
                        if !f[(a, b)].is_zero() {
                            let left = Element::basis(alg, a).scale(&f[(a, b)]);
                            terms.push(TermJson { left: text(&left), right: text(&Element::basis(alg, b)), var });
                        }
                    }
                }
            }
            EquationJson { terms, rhs: text(&system.rhs()[i]) }
        })
        .collect();
    serde_json::to_string_pretty(&SystemJson { unknowns: system.m_unk(), equations }).expect("serializable")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub monomials: Vec<Vec<ElementJson>>,
    #[serde(default)]
    pub target: Option<ElementJson>,
}

pub fn polynomial_from_json<S: Scalar>(
    text: &str,
    alg: &AlgebraRef<S>,
) -> Result<(GeneralizedPolynomial<S>, Element<S>), IoError> {
    let file: PolynomialJson = serde_json::from_str(text)?;
    let monomials = file
        .monomials
        .iter()
        .map(|m| m.iter().map(|c| element_from_json(c, alg)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if monomials.is_empty() {
        return Err(IoError::Shape("a polynomial needs at least one monomial".into()));
    }
    let target = match &file.target {
        Some(t) => element_from_json(t, alg)?,
        None => Element::zero(alg),
    };
    Ok((GeneralizedPolynomial::new(alg, monomials)?, target))
}

/// Rows `{k, x, residual, norm}`.
pub fn trace_to_json<S: Scalar>(trace: &NewtonTrace<S>) -> Value {
    Value::Array(
        trace
            .iterates
            .iter()
            .map(|it| {
                json!({
                    "k": it.k,
                    "x": element_to_json(&it.x),
                    "residual": element_to_json(&it.residual),
                    "norm": it.residual_norm,
                })
            })
            .collect(),
    )
}
