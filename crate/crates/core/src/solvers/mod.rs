//! Linear equations `Σ_s a_s x b_s = c` and systems of them.
//!
//! [`solve_field`] vectorizes the system over the base field and row reduces.
//! [`solve_richardson`] builds the enlarged algebra-valued system in the
//! unknowns `x^j e_p`, eliminates over the algebra and substitutes the
//! candidate back into the original equations.

mod quasidet;
mod richardson;

use thiserror::Error;

pub use quasidet::{quasi_inverse, quasideterminant, MAX_QUASIDET_SIZE};
pub use richardson::{
    build_richardson, build_richardson_with, nc_row_reduce, nc_row_reduce_with, solve_richardson,
    solve_richardson_with, AMatrix, EnlargedOutcome, EnlargedSolution, Engine, Layout, RichardsonOptions,
    RichardsonSystem,
};

use crate::algebra::{Algebra, AlgebraError, AlgebraRef, Element};
use crate::linalg::{row_reduce_with, FieldMatrix, ReduceOptions, SolutionKind};
use crate::scalar::Scalar;
use crate::tensor::{TensorError, TensorOp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("malformed system: {0}")]
    Shape(String),
    #[error("pivot {0} is nonzero but not invertible; the algebra is not a division algebra")]
    PivotNotInvertible(String),
    #[error("quasideterminant is undefined: the complementary minor is not invertible")]
    QuasideterminantUndefined,
}

/// `Σ_j op[i][j] ∘ x^j = rhs[i]` for every equation `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct SylvesterSystem<S: Scalar> {
    alg: AlgebraRef<S>,
    ops: Vec<Vec<TensorOp<S>>>,
    rhs: Vec<Element<S>>,
}

impl<S: Scalar> SylvesterSystem<S> {
    pub fn new(alg: &AlgebraRef<S>, ops: Vec<Vec<TensorOp<S>>>, rhs: Vec<Element<S>>) -> Result<Self, SolveError> {
        if ops.is_empty() {
            return Err(SolveError::Shape("no equations".into()));
        }
        if ops.len() != rhs.len() {
            return Err(SolveError::Shape(format!("{} equations but {} right-hand sides", ops.len(), rhs.len())));
        }
        let m_unk = ops[0].len();
        if m_unk == 0 {
            return Err(SolveError::Shape("no unknowns".into()));
        }
        if ops.iter().any(|row| row.len() != m_unk) {
            return Err(SolveError::Shape("rows have different numbers of unknowns".into()));
        }
        let same = ops.iter().flatten().all(|f| Algebra::same(alg, f.algebra()))
            && rhs.iter().all(|b| Algebra::same(alg, b.algebra()));
        if !same {
            return Err(AlgebraError::AlgebraMismatch.into());
        }
        Ok(SylvesterSystem { alg: alg.clone(), ops, rhs })
    }

    /// The single equation `f ∘ x = b`.
    pub fn single(f: TensorOp<S>, b: Element<S>) -> Result<Self, SolveError> {
        let alg = f.algebra().clone();
        Self::new(&alg, vec![vec![f]], vec![b])
    }

    pub fn builder(alg: &AlgebraRef<S>, m_unk: usize) -> SystemBuilder<S> {
        SystemBuilder { alg: alg.clone(), m_unk, ops: Vec::new(), rhs: Vec::new() }
    }

    pub fn algebra(&self) -> &AlgebraRef<S> {
        &self.alg
    }

    pub fn m_eq(&self) -> usize {
        self.ops.len()
    }

    pub fn m_unk(&self) -> usize {
        self.ops[0].len()
    }

    pub fn op(&self, i: usize, j: usize) -> &TensorOp<S> {
        &self.ops[i][j]
    }

    pub fn rhs(&self) -> &[Element<S>] {
        &self.rhs
    }

    /// Left-hand sides at `x`.
    pub fn apply(&self, x: &[Element<S>]) -> Result<Vec<Element<S>>, SolveError> {
        if x.len() != self.m_unk() {
            return Err(SolveError::Shape(format!("expected {} unknowns, got {}", self.m_unk(), x.len())));
        }
        self.ops
            .iter()
            .map(|row| {
                row.iter().zip(x).try_fold(Element::zero(&self.alg), |acc, (f, xj)| {
                    Ok(acc.checked_add(&f.apply(xj)?)?)
                })
            })
            .collect()
    }

    /// `lhs(x) - rhs` per equation.
    pub fn residuals(&self, x: &[Element<S>]) -> Result<Vec<Element<S>>, SolveError> {
        Ok(self.apply(x)?.iter().zip(&self.rhs).map(|(l, b)| l - b).collect())
    }

    /// Whether `x` satisfies every equation: exactly for rationals, to a
    /// relative `1e-9` for floats.
    pub fn is_satisfied_by(&self, x: &[Element<S>]) -> Result<bool, SolveError> {
        let res = self.residuals(x)?;
        let scale = 1.0 + x.iter().chain(&self.rhs).map(Element::norm).fold(0.0, f64::max);
        Ok(res.iter().all(|r| r.is_negligible(VERIFY_TOL * scale)))
    }

    /// Block matrix of operator matrices, `(n·m_eq) × (n·m_unk)`.
    pub fn field_matrix(&self) -> FieldMatrix<S> {
        let n = self.alg.dim();
        let mut m = FieldMatrix::zeros(n * self.m_eq(), n * self.m_unk());
        for (i, row) in self.ops.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                let block = f.operator_matrix();
                for r in 0..n {
                    for c in 0..n {
                        m[(i * n + r, j * n + c)] = block[(r, c)].clone();
                    }
                }
            }
        }
        m
    }

    pub fn field_rhs(&self) -> Vec<S> {
        self.rhs.iter().flat_map(|b| b.coords().iter().cloned()).collect()
    }

    pub fn convert<T: Scalar>(&self, alg: &AlgebraRef<T>, f: impl Fn(&S) -> T + Copy) -> SylvesterSystem<T> {
        SylvesterSystem {
            alg: alg.clone(),
            ops: self.ops.iter().map(|row| row.iter().map(|t| t.convert(alg, f)).collect()).collect(),
            rhs: self.rhs.iter().map(|b| b.convert(alg, f)).collect(),
        }
    }
}

pub(crate) const VERIFY_TOL: f64 = 1e-9;

pub struct SystemBuilder<S: Scalar> {
    alg: AlgebraRef<S>,
    m_unk: usize,
    ops: Vec<Vec<TensorOp<S>>>,
    rhs: Vec<Element<S>>,
}

impl<S: Scalar> SystemBuilder<S> {
    /// Adds `Σ left · x^var · right = rhs`.
    pub fn equation(mut self, terms: &[(Element<S>, usize, Element<S>)], rhs: Element<S>) -> Result<Self, SolveError> {
        let mut pairs = vec![Vec::new(); self.m_unk];
        for (a, var, b) in terms {
            let slot = pairs
                .get_mut(*var)
                .ok_or_else(|| SolveError::Shape(format!("unknown index {var} out of range")))?;
            slot.push((a.clone(), b.clone()));
        }
        let row = pairs
            .iter()
            .map(|p| TensorOp::from_pairs(&self.alg, p))
            .collect::<Result<Vec<_>, _>>()?;
        self.ops.push(row);
        self.rhs.push(rhs);
        Ok(self)
    }

    pub fn build(self) -> Result<SylvesterSystem<S>, SolveError> {
        SylvesterSystem::new(&self.alg, self.ops, self.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraSolutionKind {
    Unique,
    Parametric,
    Inconsistent,
    /// Richardson candidate that fails substitution into the original system.
    UnverifiedEnlarged,
}

impl std::fmt::Display for AlgebraSolutionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AlgebraSolutionKind::Unique => "unique",
            AlgebraSolutionKind::Parametric => "parametric",
            AlgebraSolutionKind::Inconsistent => "inconsistent",
            AlgebraSolutionKind::UnverifiedEnlarged => "unverified",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraSolution<S: Scalar> {
    pub kind: AlgebraSolutionKind,
    /// Particular solution, one element per unknown; empty if inconsistent.
    pub x: Vec<Element<S>>,
    /// Directions over the base field; `x + Σ C_k nullspace[k]` solves the
    /// system for every scalar choice of `C_k`.
    pub nullspace: Vec<Vec<Element<S>>>,
    pub free_names: Vec<String>,
    /// `lhs(x) - rhs` per equation.
    pub residuals: Vec<Element<S>>,
    /// The eliminated enlarged system, for Richardson results.
    pub enlarged: Option<EnlargedSolution<S>>,
}

impl<S: Scalar> AlgebraSolution<S> {
    pub(crate) fn inconsistent() -> Self {
        AlgebraSolution {
            kind: AlgebraSolutionKind::Inconsistent,
            x: Vec::new(),
            nullspace: Vec::new(),
            free_names: Vec::new(),
            residuals: Vec::new(),
            enlarged: None,
        }
    }

    /// `x + Σ params[k]·nullspace[k]`.
    pub fn point(&self, params: &[S]) -> Vec<Element<S>> {
        let mut x = self.x.clone();
        for (dir, t) in self.nullspace.iter().zip(params) {
            for (xj, dj) in x.iter_mut().zip(dir) {
                *xj = &*xj + dj.scale(t);
            }
        }
        x
    }

    pub fn residual_norm(&self) -> f64 {
        self.residuals.iter().map(|r| r.norm().powi(2)).sum::<f64>().sqrt()
    }

    pub fn is_solved(&self) -> bool {
        matches!(self.kind, AlgebraSolutionKind::Unique | AlgebraSolutionKind::Parametric)
    }
}

pub fn solve_field<S: Scalar>(system: &SylvesterSystem<S>) -> AlgebraSolution<S> {
    solve_field_with(system, &ReduceOptions::default())
}

/// Row reduces the block operator matrix and maps the scalar solution set
/// back to elements.
pub fn solve_field_with<S: Scalar>(system: &SylvesterSystem<S>, opts: &ReduceOptions) -> AlgebraSolution<S> {
    let alg = system.algebra();
    let n = alg.dim();
    let sol = row_reduce_with(&system.field_matrix(), &system.field_rhs(), opts);
    let split = |v: &[S]| -> Vec<Element<S>> {
        v.chunks(n).map(|c| Element::new(alg, c.to_vec()).expect("chunk of length n")).collect()
    };
    let kind = match sol.kind {
        SolutionKind::Inconsistent => return AlgebraSolution::inconsistent(),
        SolutionKind::Unique => AlgebraSolutionKind::Unique,
        SolutionKind::Parametric => AlgebraSolutionKind::Parametric,
    };
    let x = split(sol.particular.as_deref().expect("consistent system"));
    let residuals = system.residuals(&x).expect("shape checked");
    AlgebraSolution {
        kind,
        x,
        nullspace: sol.nullspace_basis.iter().map(|d| split(d)).collect(),
        free_names: sol.free_names,
        residuals,
        enlarged: None,
    }
}
