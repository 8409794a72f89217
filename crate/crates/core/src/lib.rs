//! Linear and nonlinear equations over finite-dimensional associative
//! algebras, with the quaternions built in.
//!
//! An [`Algebra`] is given by structural constants. Linear maps
//! `x ↦ Σ a x b` are [`TensorOp`] values; systems of them are solved either
//! over the base field ([`solve_field`]) or through the enlarged
//! algebra-valued system ([`solve_richardson`]). [`newton_solve`] handles
//! polynomial equations such as `x^2 - i*x - x*j + k = 0`.
//!
//! ```
//! use ncalg::{parse_equation, normalize_linear, collect_unknowns, quaternion_algebra, solve_field, Rational};
//!
//! let h = quaternion_algebra::<Rational>();
//! let eq = parse_equation("(i+j)*x*k + k*x*(j+k) = 1+k", h.basis_names()).unwrap();
//! let unknowns = collect_unknowns(std::slice::from_ref(&eq)).unwrap();
//! let system = normalize_linear(&[eq], &unknowns, &h).unwrap();
//! assert_eq!(solve_field(&system).x[0].to_string(), "-1/2 - 1/2j");
//! ```

pub mod algebra;
pub mod cli;
pub mod io;
pub mod linalg;
pub mod newton;
pub mod parser;
pub mod scalar;
pub mod solvers;
pub mod tensor;

pub use algebra::{quaternion_algebra, Algebra, AlgebraError, AlgebraRef, Element};
pub use linalg::{row_reduce, FieldMatrix, ReduceOptions, SolutionKind, SolutionSet};
pub use newton::{newton_solve, GeneralizedPolynomial, NewtonConfig, NewtonStatus, NewtonTrace};
pub use parser::{
    collect_unknowns, format_element, normalize_linear, normalize_poly, parse_element, parse_equation, parse_tensor,
    ParseError,
};
pub use scalar::{Rational, Scalar, ScalarMode};
pub use solvers::{
    build_richardson, solve_field, solve_richardson, AlgebraSolution, AlgebraSolutionKind, SolveError,
    SylvesterSystem,
};
pub use tensor::{TensorError, TensorOp};
