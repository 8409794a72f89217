//! Elements of `A ⊗ A` acting on `A` by `(a ⊗ b) ∘ x = a x b`.
//!
//! A [`TensorOp`] is stored in standard representation `f = f^ij e_i ⊗ e_j`,
//! an `n × n` scalar matrix. Equality is equality of that matrix. The simple
//! tensors a value was built from are kept only for display.

use std::fmt;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, AlgebraRef, Element};
use crate::linalg::{row_reduce_with, FieldMatrix, ReduceOptions, SolutionKind};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("tensor is singular")]
    SingularTensor,
    #[error("solution of the inversion system is only a one-sided inverse")]
    OneSidedInverse,
    #[error("coefficient matrix must be {n}x{n}")]
    BadShape { n: usize },
}

#[derive(Clone)]
pub struct TensorOp<S> {
    alg: AlgebraRef<S>,
    coeff: FieldMatrix<S>,
    display_pairs: Option<Vec<(Element<S>, Element<S>)>>,
}

impl<S: Scalar> TensorOp<S> {
    pub fn zero(alg: &AlgebraRef<S>) -> Self {
        let n = alg.dim();
        TensorOp { alg: alg.clone(), coeff: FieldMatrix::zeros(n, n), display_pairs: None }
    }

    /// `e0 ⊗ e0`, the identity map.
    pub fn identity(alg: &AlgebraRef<S>) -> Self {
        let mut t = Self::zero(alg);
        t.coeff[(0, 0)] = S::one();
        t
    }

    pub fn from_coeff(alg: &AlgebraRef<S>, coeff: FieldMatrix<S>) -> Result<Self, TensorError> {
        let n = alg.dim();
        if coeff.rows() != n || coeff.cols() != n {
            return Err(TensorError::BadShape { n });
        }
        Ok(TensorOp { alg: alg.clone(), coeff, display_pairs: None })
    }

    /// `a ⊗ b`.
    pub fn simple(a: &Element<S>, b: &Element<S>) -> Result<Self, TensorError> {
        Self::from_pairs(a.algebra(), &[(a.clone(), b.clone())])
    }

    /// `Σ_s a_s ⊗ b_s`, with `coeff^ij = Σ_s a_s^i b_s^j`.
    pub fn from_pairs(alg: &AlgebraRef<S>, pairs: &[(Element<S>, Element<S>)]) -> Result<Self, TensorError> {
        let n = alg.dim();
        let mut coeff = FieldMatrix::<S>::zeros(n, n);
        for (a, b) in pairs {
            if !Algebra::same(alg, a.algebra()) || !Algebra::same(alg, b.algebra()) {
                return Err(AlgebraError::AlgebraMismatch.into());
            }
            for (i, ai) in a.coords().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                for (j, bj) in b.coords().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    coeff[(i, j)] = coeff[(i, j)].clone() + ai.clone() * bj.clone();
                }
            }
        }
        Ok(TensorOp { alg: alg.clone(), coeff, display_pairs: Some(pairs.to_vec()) })
    }

    pub fn algebra(&self) -> &AlgebraRef<S> {
        &self.alg
    }

    pub fn coeff(&self) -> &FieldMatrix<S> {
        &self.coeff
    }

    pub fn display_pairs(&self) -> Option<&[(Element<S>, Element<S>)]> {
        self.display_pairs.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    fn check(&self, alg: &AlgebraRef<S>) -> Result<(), TensorError> {
        if Algebra::same(&self.alg, alg) {
            Ok(())
        } else {
            Err(AlgebraError::AlgebraMismatch.into())
        }
    }

    /// `Σ f^ij e_i x e_j`.
    pub fn apply(&self, x: &Element<S>) -> Result<Element<S>, TensorError> {
        self.check(x.algebra())?;
        let n = self.alg.dim();
        let mut out = vec![S::zero(); n];
        for i in 0..n {
            let mut left: Option<Vec<S>> = None;
            for j in 0..n {
                let f = &self.coeff[(i, j)];
                if f.is_zero() {
                    continue;
                }
                let ex = left.get_or_insert_with(|| {
                    let mut e = vec![S::zero(); n];
                    e[i] = S::one();
                    self.alg.mul_coords(&e, x.coords())
                });
                for (m, v) in ex.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    for (k, c) in self.alg.product_terms(m, j) {
                        out[*k] = out[*k].clone() + f.clone() * v.clone() * c.clone();
                    }
                }
            }
        }
        Ok(Element::new(&self.alg, out)?)
    }

    /// Standard representation of `x ↦ self(other(x))`:
    /// `(f∘g)^pq = f^ij g^kl C^p_ik C^q_lj`.
    pub fn compose(&self, other: &Self) -> Result<Self, TensorError> {
        self.check(&other.alg)?;
        let n = self.alg.dim();
        let mut coeff = FieldMatrix::<S>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let f = &self.coeff[(i, j)];
                if f.is_zero() {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        let g = &other.coeff[(k, l)];
                        if g.is_zero() {
                            continue;
                        }
                        let fg = f.clone() * g.clone();
                        for (p, c1) in self.alg.product_terms(i, k) {
                            for (q, c2) in self.alg.product_terms(l, j) {
                                coeff[(*p, *q)] = coeff[(*p, *q)].clone() + fg.clone() * c1.clone() * c2.clone();
                            }
                        }
                    }
                }
            }
        }
        Ok(TensorOp { alg: self.alg.clone(), coeff, display_pairs: None })
    }

    /// Field matrix `M` with `M·coords(x) = coords(f ∘ x)`.
    pub fn operator_matrix(&self) -> FieldMatrix<S> {
        let n = self.alg.dim();
        let mut m = FieldMatrix::zeros(n, n);
        for col in 0..n {
            let image = self.apply(&Element::basis(&self.alg, col)).expect("same algebra");
            for (row, v) in image.into_coords().into_iter().enumerate() {
                m[(row, col)] = v;
            }
        }
        m
    }

    /// The `n² × n²` matrix of `g ↦ f∘g` on standard components, rows
    /// indexed by `(p, q)` and columns by `(k, l)`.
    fn left_composition_matrix(&self) -> FieldMatrix<S> {
        let n = self.alg.dim();
        let mut m = FieldMatrix::<S>::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let f = &self.coeff[(i, j)];
                if f.is_zero() {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        for (p, c1) in self.alg.product_terms(i, k) {
                            for (q, c2) in self.alg.product_terms(l, j) {
                                let (r, c) = (p * n + q, k * n + l);
                                m[(r, c)] = m[(r, c)].clone() + f.clone() * c1.clone() * c2.clone();
                            }
                        }
                    }
                }
            }
        }
        m
    }

    pub fn invert(&self) -> Result<Self, TensorError> {
        self.invert_with(&ReduceOptions::default())
    }

    /// Solves `f^ij C^p_ik C^q_lj g^kl = δ(p,0)δ(q,0)` for `g`, then checks
    /// `f∘g = g∘f = e0⊗e0`.
    pub fn invert_with(&self, opts: &ReduceOptions) -> Result<Self, TensorError> {
        let n = self.alg.dim();
        let system = self.left_composition_matrix();
        let mut rhs = vec![S::zero(); n * n];
        rhs[0] = S::one();
        let sol = row_reduce_with(&system, &rhs, opts);
        if sol.kind == SolutionKind::Inconsistent {
            return Err(TensorError::SingularTensor);
        }
        let g_coords = sol.particular.expect("consistent system has a particular solution");
        let g = TensorOp {
            alg: self.alg.clone(),
            coeff: FieldMatrix::from_fn(n, n, |k, l| g_coords[k * n + l].clone()),
            display_pairs: None,
        };
        let id = Self::identity(&self.alg);
        let tol = if S::is_exact() { 0.0 } else { 1e-9 * (1.0 + g.coeff.max_magnitude()) };
        if !self.compose(&g)?.approx_eq(&id, tol) {
            return Err(TensorError::SingularTensor);
        }
        if !g.compose(self)?.approx_eq(&id, tol) {
            return Err(TensorError::OneSidedInverse);
        }
        Ok(g)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        Algebra::same(&self.alg, &other.alg) && self.coeff.approx_eq(&other.coeff, tol)
    }

    pub fn add(&self, other: &Self) -> Result<Self, TensorError> {
        self.check(&other.alg)?;
        let display_pairs = match (&self.display_pairs, &other.display_pairs) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        Ok(TensorOp { alg: self.alg.clone(), coeff: self.coeff.add(&other.coeff), display_pairs })
    }

    pub fn scale(&self, s: &S) -> Self {
        TensorOp {
            alg: self.alg.clone(),
            coeff: self.coeff.scale(s),
            display_pairs: self
                .display_pairs
                .as_ref()
                .map(|pairs| pairs.iter().map(|(a, b)| (a.scale(s), b.clone())).collect()),
        }
    }

    /// Renders `display_pairs` as `(i + j)⊗k + k⊗(j + k)`; falls back to the
    /// standard form.
    pub fn pairs_string(&self) -> String {
        let Some(pairs) = &self.display_pairs else {
            return self.to_string();
        };
        if pairs.is_empty() {
            return "0".into();
        }
        let wrap = |e: &Element<S>| {
            let s = crate::parser::format_element(e);
            if s.contains(' ') || s.starts_with('-') {
                format!("({s})")
            } else {
                s
            }
        };
        pairs.iter().map(|(a, b)| format!("{}⊗{}", wrap(a), wrap(b))).collect::<Vec<_>>().join(" + ")
    }

    /// Converts coefficients to another scalar mode.
    pub fn convert<T: Scalar>(&self, alg: &AlgebraRef<T>, f: impl Fn(&S) -> T) -> TensorOp<T> {
        let n = self.alg.dim();
        TensorOp {
            alg: alg.clone(),
            coeff: FieldMatrix::from_fn(n, n, |i, j| f(&self.coeff[(i, j)])),
            display_pairs: None,
        }
    }
}

impl<S: Scalar> PartialEq for TensorOp<S> {
    fn eq(&self, other: &Self) -> bool {
        Algebra::same(&self.alg, &other.alg) && self.coeff == other.coeff
    }
}

impl<S: Scalar> fmt::Debug for TensorOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorOp({self})")
    }
}

/// Standard form, e.g. `1/4(i⊗j) + 1/2(k⊗k)`.
impl<S: Scalar> fmt::Display for TensorOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.alg.basis_names();
        let n = self.alg.dim();
        let mut first = true;
        for i in 0..n {
            for j in 0..n {
                let c = &self.coeff[(i, j)];
                if c.is_zero() {
                    continue;
                }
                let neg = c.is_negative();
                let mag = c.abs();
                match (first, neg) {
                    (true, true) => f.write_str("-")?,
                    (true, false) => {}
                    (false, true) => f.write_str(" - ")?,
                    (false, false) => f.write_str(" + ")?,
                }
                first = false;
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                write!(f, "({}⊗{})", names[i], names[j])?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
