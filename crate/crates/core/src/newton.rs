//! Newton's method for `f(x) = a` where `f` is a generalized polynomial and
//! the derivative at each iterate is a tensor acting on the step.

use crate::algebra::{Algebra, AlgebraError, AlgebraRef, Element};
use crate::scalar::Scalar;
use crate::tensor::{TensorError, TensorOp};

/// `Σ c0·x·c1·x·…·x·cd` over monomials `[c0, …, cd]`.
///
/// Stored canonically: each coefficient is scaled so its first nonzero
/// coordinate is `1`, the collected scalar sits on the first non-scalar
/// coefficient (or on `c0`), monomials with the same shape are merged,
/// constants are summed, and zero monomials dropped. `-i*x` is `[-i, 1]`,
/// `-x*j` is `[1, -j]` and `x^2` is `[1, 1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedPolynomial<S: Scalar> {
    alg: AlgebraRef<S>,
    monomials: Vec<Vec<Element<S>>>,
}

impl<S: Scalar> GeneralizedPolynomial<S> {
    pub fn new(alg: &AlgebraRef<S>, monomials: Vec<Vec<Element<S>>>) -> Result<Self, AlgebraError> {
        if monomials.iter().flatten().any(|c| !Algebra::same(alg, c.algebra())) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        // (shape, collected scalar) in order of first appearance
        let mut merged: Vec<(Vec<Element<S>>, S)> = Vec::new();
        for mono in monomials {
            if mono.is_empty() || mono.iter().any(Element::is_zero) {
                continue;
            }
            if mono.len() == 1 {
                match merged.iter_mut().find(|(s, _)| s.len() == 1) {
                    Some((s, _)) => s[0] = &s[0] + &mono[0],
                    None => merged.push((mono, S::one())),
                }
                continue;
            }
            let mut lambda = S::one();
            let shape: Vec<Element<S>> = mono
                .iter()
                .map(|c| {
                    let lead = c.coords().iter().find(|v| !v.is_zero()).expect("nonzero").clone();
                    lambda = lambda.clone() * lead.clone();
                    c.scale(&(S::one() / lead))
                })
                .collect();
            match merged.iter_mut().find(|(s, _)| *s == shape) {
                Some((_, total)) => *total = total.clone() + lambda,
                None => merged.push((shape, lambda)),
            }
        }
        let mut out: Vec<Vec<Element<S>>> = merged
            .into_iter()
            .filter(|(shape, lambda)| !lambda.is_zero() && !shape[0].is_zero())
            .map(|(mut shape, lambda)| {
                let slot = shape.iter().position(|c| !c.is_scalar()).unwrap_or(0);
                shape[slot] = shape[slot].scale(&lambda);
                shape
            })
            .collect();
        if out.is_empty() {
            out.push(vec![Element::zero(alg)]);
        }
        Ok(GeneralizedPolynomial { alg: alg.clone(), monomials: out })
    }

    /// The constant polynomial `c`.
    pub fn constant(c: Element<S>) -> Self {
        let alg = c.algebra().clone();
        Self::new(&alg, vec![vec![c]]).expect("single algebra")
    }

    pub fn algebra(&self) -> &AlgebraRef<S> {
        &self.alg
    }

    pub fn monomials(&self) -> &[Vec<Element<S>>] {
        &self.monomials
    }

    pub fn degree(&self) -> usize {
        self.monomials.iter().map(|m| m.len() - 1).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &Element<S>) -> Result<Element<S>, AlgebraError> {
        let mut total = Element::zero(&self.alg);
        for mono in &self.monomials {
            let mut term = mono[0].clone();
            for c in &mono[1..] {
                term = term.checked_mul(x)?.checked_mul(c)?;
            }
            total = total.checked_add(&term)?;
        }
        Ok(total)
    }

    /// The map `h ↦ Σ c0 x0 … c_{t-1} · h · c_t x0 … c_d`, summed over every
    /// position of `x`, as a tensor.
    pub fn derivative_at(&self, x0: &Element<S>) -> Result<TensorOp<S>, TensorError> {
        let mut pairs = Vec::new();
        for mono in &self.monomials {
            let d = mono.len() - 1;
            for t in 1..=d {
                let mut left = mono[0].clone();
                for c in &mono[1..t] {
                    left = left.checked_mul(x0)?.checked_mul(c)?;
                }
                let mut right = mono[t].clone();
                for c in &mono[t + 1..] {
                    right = right.checked_mul(x0)?.checked_mul(c)?;
                }
                pairs.push((left, right));
            }
        }
        TensorOp::from_pairs(&self.alg, &pairs)
    }

    pub fn convert<T: Scalar>(&self, alg: &AlgebraRef<T>, f: impl Fn(&S) -> T + Copy) -> GeneralizedPolynomial<T> {
        let monomials = self.monomials.iter().map(|m| m.iter().map(|c| c.convert(alg, f)).collect()).collect();
        GeneralizedPolynomial::new(alg, monomials).expect("single algebra")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    /// Stop once `‖f(x) - a‖` drops below this.
    pub tol: f64,
    pub max_iter: usize,
    /// A run counts as diverging when the residual norm stays above this
    /// multiple of the initial norm for five consecutive steps.
    pub divergence_factor: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig { tol: 1e-9, max_iter: 50, divergence_factor: 1e12 }
    }
}

const DIVERGENCE_STREAK: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NewtonStatus {
    Converged,
    SingularDerivative,
    MaxIterations,
    Diverged,
}

impl std::fmt::Display for NewtonStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NewtonStatus::Converged => "converged",
            NewtonStatus::SingularDerivative => "singular-derivative",
            NewtonStatus::MaxIterations => "max-iterations",
            NewtonStatus::Diverged => "diverged",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonIterate<S: Scalar> {
    pub k: usize,
    pub x: Element<S>,
    /// `f(x) - a`, recomputed at `x`.
    pub residual: Element<S>,
    pub residual_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonTrace<S: Scalar> {
    pub iterates: Vec<NewtonIterate<S>>,
    pub status: NewtonStatus,
}

impl<S: Scalar> NewtonTrace<S> {
    pub fn last(&self) -> &NewtonIterate<S> {
        self.iterates.last().expect("trace holds the starting point")
    }

    /// Number of Newton steps taken.
    pub fn steps(&self) -> usize {
        self.iterates.len() - 1
    }
}

/// Iterates `x ← D⁻¹ ∘ (D ∘ x − (f(x) − a))` with `D` the derivative at `x`.
pub fn newton_solve<S: Scalar>(
    p: &GeneralizedPolynomial<S>,
    a: &Element<S>,
    x0: &Element<S>,
    cfg: &NewtonConfig,
) -> Result<NewtonTrace<S>, AlgebraError> {
    if !Algebra::same(p.algebra(), a.algebra()) || !Algebra::same(p.algebra(), x0.algebra()) {
        return Err(AlgebraError::AlgebraMismatch);
    }
    let iterate = |k: usize, x: Element<S>| -> Result<NewtonIterate<S>, AlgebraError> {
        let residual = p.eval(&x)?.checked_sub(a)?;
        let residual_norm = residual.norm();
        Ok(NewtonIterate { k, x, residual, residual_norm })
    };
    let mut iterates = vec![iterate(0, x0.clone())?];
    let initial = iterates[0].residual_norm;
    let mut streak = 0;
    let status = loop {
        let cur = iterates.last().expect("nonempty");
        if cur.residual_norm < cfg.tol {
            break NewtonStatus::Converged;
        }
        if !cur.residual_norm.is_finite() {
            break NewtonStatus::Diverged;
        }
        if cur.k >= cfg.max_iter {
            break NewtonStatus::MaxIterations;
        }
        let step = p.derivative_at(&cur.x).and_then(|d| {
            let g = d.invert()?;
            let rhs = d.apply(&cur.x)?.checked_sub(&cur.residual)?;
            g.apply(&rhs)
        });
        let next = match step {
            Ok(x) => x,
            Err(TensorError::SingularTensor | TensorError::OneSidedInverse) => break NewtonStatus::SingularDerivative,
            Err(TensorError::Algebra(e)) => return Err(e),
            Err(TensorError::BadShape { .. }) => unreachable!("derivative has the algebra's shape"),
        };
        let k = cur.k + 1;
        let it = iterate(k, next)?;
        streak = if it.residual_norm > cfg.divergence_factor * initial { streak + 1 } else { 0 };
        iterates.push(it);
        if streak >= DIVERGENCE_STREAK {
            break NewtonStatus::Diverged;
        }
    };
    Ok(NewtonTrace { iterates, status })
}
