//! Finite-dimensional associative unital algebras given by structural
//! constants, and their elements.
//!
//! An algebra of dimension `n` is fixed by the array `C[i][j][k]` with
//! `e_i e_j = Σ_k C[i][j][k] e_k`. Basis index 0 is always the unit.

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::linalg::{row_reduce_with, FieldMatrix, ReduceOptions, SolutionKind, DEFAULT_ZERO_TOL};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("algebra dimension must be at least 1")]
    EmptyAlgebra,
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid basis names: {0}")]
    BadBasis(String),
    #[error("e0 is not the unit: C[{i}][{j}][{k}] violates the unit law")]
    UnitLawViolation { i: usize, j: usize, k: usize },
    #[error("structural constants are not associative at (i, j, k, p) = ({i}, {j}, {k}, {p})")]
    NonAssociative { i: usize, j: usize, k: usize, p: usize },
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("element is not invertible")]
    NotInvertible,
}

pub struct Algebra<S> {
    name: String,
    dim: usize,
    basis: Vec<String>,
    /// Flattened `C[i][j][k]`, index `(i * n + j) * n + k`.
    constants: Vec<S>,
    /// Nonzero `(k, C[i][j][k])` for each `(i, j)`, index `i * n + j`.
    products: Vec<Vec<(usize, S)>>,
    /// `1` or `-1` where the matching entry of `products` is `±1`, else `0`.
    signs: Vec<Vec<i8>>,
}

pub type AlgebraRef<S> = Arc<Algebra<S>>;

impl<S: Scalar> Algebra<S> {
    /// Validates the unit law and associativity. `basis` may be empty, in
    /// which case names `1, e1, e2, ...` are generated.
    pub fn new(
        name: impl Into<String>,
        constants: Vec<Vec<Vec<S>>>,
        basis: Vec<String>,
    ) -> Result<AlgebraRef<S>, AlgebraError> {
        let n = constants.len();
        if n == 0 {
            return Err(AlgebraError::EmptyAlgebra);
        }
        let mut flat = Vec::with_capacity(n * n * n);
        for plane in constants {
            if plane.len() != n {
                return Err(AlgebraError::DimensionMismatch { expected: n, found: plane.len() });
            }
            for line in plane {
                if line.len() != n {
                    return Err(AlgebraError::DimensionMismatch { expected: n, found: line.len() });
                }
                flat.extend(line);
            }
        }
        let basis = if basis.is_empty() {
            std::iter::once("1".to_string()).chain((1..n).map(|i| format!("e{i}"))).collect()
        } else {
            basis
        };
        validate_basis(&basis, n)?;

        let products: Vec<Vec<(usize, S)>> = (0..n * n)
            .map(|ij| {
                (0..n)
                    .filter_map(|k| {
                        let c = &flat[ij * n + k];
                        (!c.is_zero()).then(|| (k, c.clone()))
                    })
                    .collect()
            })
            .collect();
        let signs = products
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|(_, c)| {
                        if *c == S::one() {
                            1
                        } else if *c == -S::one() {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        let alg = Algebra { name: name.into(), dim: n, basis, constants: flat, products, signs };
        alg.check_unit_law()?;
        alg.check_associativity()?;
        Ok(Arc::new(alg))
    }

    fn check_unit_law(&self) -> Result<(), AlgebraError> {
        let n = self.dim;
        for j in 0..n {
            for k in 0..n {
                let delta = if j == k { S::one() } else { S::zero() };
                if *self.c(0, j, k) != delta {
                    return Err(AlgebraError::UnitLawViolation { i: 0, j, k });
                }
                if *self.c(j, 0, k) != delta {
                    return Err(AlgebraError::UnitLawViolation { i: j, j: 0, k });
                }
            }
        }
        Ok(())
    }

    /// `Σ_m C^m_ij C^p_mk = Σ_m C^p_im C^m_jk` for all `i, j, k, p`.
    fn check_associativity(&self) -> Result<(), AlgebraError> {
        let n = self.dim;
        let scale = self.constants.iter().map(S::magnitude).fold(1.0, f64::max);
        let tol = DEFAULT_ZERO_TOL * scale * scale * n as f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.mul_coords(&self.mul_coords(&self.unit_coords(i), &self.unit_coords(j)), &self.unit_coords(k));
                    let right = self.mul_coords(&self.unit_coords(i), &self.mul_coords(&self.unit_coords(j), &self.unit_coords(k)));
                    for p in 0..n {
                        if !(left[p].clone() - right[p].clone()).is_negligible(tol) {
                            return Err(AlgebraError::NonAssociative { i, j, k, p });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    /// Structural constant `C^k_ij`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &S {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    /// Nonzero terms of `e_i e_j` as `(k, C^k_ij)`.
    pub fn product_terms(&self, i: usize, j: usize) -> &[(usize, S)] {
        &self.products[i * self.dim + j]
    }

    pub fn constants(&self) -> Vec<Vec<Vec<S>>> {
        let n = self.dim;
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| self.c(i, j, k).clone()).collect()).collect()).collect()
    }

    fn unit_coords(&self, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim];
        v[i] = S::one();
        v
    }

    /// Product of coordinate vectors: `(ab)^k = Σ a^i b^j C^k_ij`.
    pub fn mul_coords(&self, a: &[S], b: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, ai) in a.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let ab = ai.clone() * bj.clone();
                for ((k, c), sign) in self.product_terms(i, j).iter().zip(&self.signs[i * self.dim + j]) {
                    let acc = std::mem::replace(&mut out[*k], S::zero());
                    out[*k] = match sign {
                        1 => acc + ab.clone(),
                        -1 => acc - ab.clone(),
                        _ => acc + ab.clone() * c.clone(),
                    };
                }
            }
        }
        out
    }

    /// Whether two references denote the same algebra.
    pub fn same(a: &AlgebraRef<S>, b: &AlgebraRef<S>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

fn validate_basis(basis: &[String], n: usize) -> Result<(), AlgebraError> {
    if basis.len() != n {
        return Err(AlgebraError::BadBasis(format!("expected {n} names, found {}", basis.len())));
    }
    for (idx, name) in basis.iter().enumerate() {
        let ok_ident = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !(ok_ident || (idx == 0 && name == "1")) {
            return Err(AlgebraError::BadBasis(format!("`{name}` is not an identifier")));
        }
        if basis[..idx].contains(name) {
            return Err(AlgebraError::BadBasis(format!("duplicate name `{name}`")));
        }
    }
    Ok(())
}

impl<S: Scalar> PartialEq for Algebra<S> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.basis == other.basis && self.constants == other.constants
    }
}

impl<S: Scalar> fmt::Debug for Algebra<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("basis", &self.basis)
            .finish_non_exhaustive()
    }
}

/// The real quaternions with basis `1, i, j, k`: `i² = j² = k² = -1`,
/// `ij = k`, `jk = i`, `ki = j`.
pub fn quaternion_algebra<S: Scalar>() -> AlgebraRef<S> {
    static CACHE: OnceLock<Mutex<HashMap<TypeId, Box<dyn Any + Send + Sync>>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
    cache
        .entry(TypeId::of::<S>())
        .or_insert_with(|| Box::new(build_quaternions::<S>()))
        .downcast_ref::<AlgebraRef<S>>()
        .expect("cache keyed by type")
        .clone()
}

fn build_quaternions<S: Scalar>() -> AlgebraRef<S> {
    // (sign, index) of e_a e_b
    const TABLE: [[(i64, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let constants = (0..4)
        .map(|a| {
            (0..4)
                .map(|b| {
                    let (sign, idx) = TABLE[a][b];
                    (0..4).map(|k| if k == idx { S::from_i64(sign) } else { S::zero() }).collect()
                })
                .collect()
        })
        .collect();
    let basis = ["1", "i", "j", "k"].map(String::from).to_vec();
    Algebra::new("quaternion", constants, basis).expect("quaternion table is a valid algebra")
}

/// An element `Σ a^k e_k` of an algebra.
#[derive(Clone)]
pub struct Element<S> {
    alg: AlgebraRef<S>,
    coords: Vec<S>,
}

impl<S: Scalar> Element<S> {
    pub fn new(alg: &AlgebraRef<S>, coords: Vec<S>) -> Result<Self, AlgebraError> {
        if coords.len() != alg.dim() {
            return Err(AlgebraError::DimensionMismatch { expected: alg.dim(), found: coords.len() });
        }
        Ok(Element { alg: alg.clone(), coords })
    }

    /// Panics on a length mismatch.
    pub fn from_ints(alg: &AlgebraRef<S>, coords: &[i64]) -> Self {
        Self::new(alg, coords.iter().map(|&c| S::from_i64(c)).collect()).expect("coordinate count")
    }

    pub fn zero(alg: &AlgebraRef<S>) -> Self {
        Element { alg: alg.clone(), coords: vec![S::zero(); alg.dim()] }
    }

    pub fn one(alg: &AlgebraRef<S>) -> Self {
        Self::basis(alg, 0)
    }

    pub fn basis(alg: &AlgebraRef<S>, i: usize) -> Self {
        let mut e = Self::zero(alg);
        e.coords[i] = S::one();
        e
    }

    /// `s·1`.
    pub fn scalar(alg: &AlgebraRef<S>, s: S) -> Self {
        let mut e = Self::zero(alg);
        e.coords[0] = s;
        e
    }

    pub fn algebra(&self) -> &AlgebraRef<S> {
        &self.alg
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(S::is_zero)
    }

    /// Whether the element is a multiple of the unit.
    pub fn is_scalar(&self) -> bool {
        self.coords[1..].iter().all(S::is_zero)
    }

    /// Zero test with a float tolerance on the Euclidean norm.
    pub fn is_negligible(&self, tol: f64) -> bool {
        if S::is_exact() {
            self.is_zero()
        } else {
            self.norm() <= tol
        }
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if Algebra::same(&self.alg, &other.alg) {
            Ok(())
        } else {
            Err(AlgebraError::AlgebraMismatch)
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(Element { alg: self.alg.clone(), coords: self.alg.mul_coords(&self.coords, &other.coords) })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Element { alg: self.alg.clone(), coords })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(Element { alg: self.alg.clone(), coords })
    }

    pub fn scale(&self, s: &S) -> Self {
        Element { alg: self.alg.clone(), coords: self.coords.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    /// Matrix of `x ↦ a·x` in the basis.
    pub fn left_matrix(&self) -> FieldMatrix<S> {
        let n = self.alg.dim();
        let mut m = FieldMatrix::<S>::zeros(n, n);
        for (i, ai) in self.coords.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for col in 0..n {
                for (k, c) in self.alg.product_terms(i, col) {
                    m[(*k, col)] = m[(*k, col)].clone() + ai.clone() * c.clone();
                }
            }
        }
        m
    }

    /// Matrix of `x ↦ x·a` in the basis.
    pub fn right_matrix(&self) -> FieldMatrix<S> {
        let n = self.alg.dim();
        let mut m = FieldMatrix::<S>::zeros(n, n);
        for (j, aj) in self.coords.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for col in 0..n {
                for (k, c) in self.alg.product_terms(col, j) {
                    m[(*k, col)] = m[(*k, col)].clone() + aj.clone() * c.clone();
                }
            }
        }
        m
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        self.inverse_with(&ReduceOptions::default())
    }

    /// Solves `L(a)·y = e0` and checks `y·a = 1`.
    pub fn inverse_with(&self, opts: &ReduceOptions) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::NotInvertible);
        }
        let one = Self::one(&self.alg);
        let sol = row_reduce_with(&self.left_matrix(), &one.coords, opts);
        if sol.kind != SolutionKind::Unique {
            return Err(AlgebraError::NotInvertible);
        }
        let y = Element { alg: self.alg.clone(), coords: sol.particular.expect("unique solution") };
        let check = (&y * self) - &one;
        let tol = if S::is_exact() { 0.0 } else { 1e-9 * (1.0 + self.norm() * y.norm()) };
        if !check.is_negligible(tol) {
            return Err(AlgebraError::NotInvertible);
        }
        Ok(y)
    }

    /// Exact squared Euclidean norm of the coordinates.
    pub fn norm_squared(&self) -> S {
        self.coords.iter().fold(S::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c.to_f64().powi(2)).sum::<f64>().sqrt()
    }

    /// Converts the coordinates to another scalar mode over the matching
    /// algebra.
    pub fn convert<T: Scalar>(&self, alg: &AlgebraRef<T>, f: impl Fn(&S) -> T) -> Element<T> {
        assert_eq!(alg.dim(), self.alg.dim());
        Element { alg: alg.clone(), coords: self.coords.iter().map(f).collect() }
    }
}

impl<S: Scalar> PartialEq for Element<S> {
    fn eq(&self, other: &Self) -> bool {
        Algebra::same(&self.alg, &other.alg) && self.coords == other.coords
    }
}

impl<S: Scalar> fmt::Debug for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({})", crate::parser::format_element(self))
    }
}

impl<S: Scalar> fmt::Display for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::format_element(self))
    }
}

// The operator impls panic on mixed algebras; use the `checked_*` methods
// where that can happen.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<S: Scalar> $trait<&Element<S>> for &Element<S> {
            type Output = Element<S>;

            fn $method(self, rhs: &Element<S>) -> Element<S> {
                self.$checked(rhs).expect("operands from different algebras")
            }
        }

        impl<S: Scalar> $trait<Element<S>> for Element<S> {
            type Output = Element<S>;

            fn $method(self, rhs: Element<S>) -> Element<S> {
                (&self).$method(&rhs)
            }
        }

        impl<S: Scalar> $trait<&Element<S>> for Element<S> {
            type Output = Element<S>;

            fn $method(self, rhs: &Element<S>) -> Element<S> {
                (&self).$method(rhs)
            }
        }

        impl<S: Scalar> $trait<Element<S>> for &Element<S> {
            type Output = Element<S>;

            fn $method(self, rhs: Element<S>) -> Element<S> {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<S: Scalar> Neg for &Element<S> {
    type Output = Element<S>;

    fn neg(self) -> Element<S> {
        Element { alg: self.alg.clone(), coords: self.coords.iter().map(|c| -c.clone()).collect() }
    }
}

impl<S: Scalar> Neg for Element<S> {
    type Output = Element<S>;

    fn neg(self) -> Element<S> {
        -&self
    }
}
