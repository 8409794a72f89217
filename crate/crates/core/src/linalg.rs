//! Dense matrices over the scalar field and Gauss-Jordan elimination.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

/// Default zero threshold for float pivots.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct FieldMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> FieldMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FieldMatrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        FieldMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FieldMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FieldMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        FieldMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    /// Largest entry magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(S::magnitude).fold(0.0, f64::max)
    }

    /// Entrywise comparison, exact for rationals and within `tol` for floats.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| (a.clone() - b.clone()).is_negligible(tol))
    }

    /// Two-sided inverse by elimination on `[M | I]`; `None` if singular or
    /// not square.
    pub fn inverse(&self) -> Option<Self> {
        self.inverse_with(&ReduceOptions::default())
    }

    pub fn inverse_with(&self, opts: &ReduceOptions) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let ech = echelon(&mut aug, n, opts);
        if ech.pivots.len() < n {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| aug[(i, n + j)].clone()))
    }
}

impl<S> Index<(usize, usize)> for FieldMatrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for FieldMatrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S: fmt::Display> fmt::Debug for FieldMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> =
                self.data[i * self.cols..(i + 1) * self.cols].iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReduceOptions {
    /// Relative pivot threshold, float mode only.
    pub zero_tol: f64,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { zero_tol: DEFAULT_ZERO_TOL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    Unique,
    Parametric,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet<S> {
    pub kind: SolutionKind,
    pub particular: Option<Vec<S>>,
    pub nullspace_basis: Vec<Vec<S>>,
    pub free_names: Vec<String>,
    /// Column index of each free parameter.
    pub free_columns: Vec<usize>,
}

impl<S: Scalar> SolutionSet<S> {
    /// `particular + Σ params[k]·nullspace_basis[k]`.
    pub fn point(&self, params: &[S]) -> Option<Vec<S>> {
        let mut x = self.particular.clone()?;
        for (dir, t) in self.nullspace_basis.iter().zip(params) {
            for (xi, di) in x.iter_mut().zip(dir) {
                *xi = xi.clone() + t.clone() * di.clone();
            }
        }
        Some(x)
    }
}

/// Names for free parameters: `C0`, `C1`, ...
pub fn parameter_names(count: usize) -> Vec<String> {
    (0..count).map(|k| format!("C{k}")).collect()
}

pub(crate) struct Echelon {
    /// `(row, column)` of each pivot, in order.
    pub pivots: Vec<(usize, usize)>,
}

/// Reduces the first `ncols` columns of `m` to reduced row echelon form,
/// applying the same row operations to the remaining columns.
///
/// Exact scalars take the first nonzero entry of each column as pivot; floats
/// take the largest magnitude and treat anything at or below
/// `zero_tol * scale` as zero.
pub(crate) fn echelon<S: Scalar>(m: &mut FieldMatrix<S>, ncols: usize, opts: &ReduceOptions) -> Echelon {
    let rows = m.rows;
    let width = m.cols;
    let tol = opts.zero_tol * m.max_magnitude().max(1.0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        let pivot_row = if S::is_exact() {
            (r..rows).find(|&i| !m[(i, c)].is_zero())
        } else {
            (r..rows)
                .filter(|&i| !m[(i, c)].is_negligible(tol))
                .max_by(|&a, &b| m[(a, c)].magnitude().total_cmp(&m[(b, c)].magnitude()))
        };
        let Some(p) = pivot_row else {
            if !S::is_exact() {
                for i in r..rows {
                    m[(i, c)] = S::zero();
                }
            }
            continue;
        };
        if p != r {
            for j in 0..width {
                m.data.swap(p * width + j, r * width + j);
            }
        }
        let inv = S::one() / m[(r, c)].clone();
        for j in 0..width {
            if !m[(r, j)].is_zero() {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
        }
        m[(r, c)] = S::one();
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let factor = m[(i, c)].clone();
            for j in 0..width {
                if !m[(r, j)].is_zero() {
                    m[(i, j)] = m[(i, j)].clone() - factor.clone() * m[(r, j)].clone();
                }
            }
            m[(i, c)] = S::zero();
        }
        pivots.push((r, c));
        r += 1;
    }
    Echelon { pivots }
}

pub fn row_reduce<S: Scalar>(m: &FieldMatrix<S>, rhs: &[S]) -> SolutionSet<S> {
    row_reduce_with(m, rhs, &ReduceOptions::default())
}

/// Classifies the solution set of `m·x = rhs`.
pub fn row_reduce_with<S: Scalar>(m: &FieldMatrix<S>, rhs: &[S], opts: &ReduceOptions) -> SolutionSet<S> {
    assert_eq!(m.rows, rhs.len(), "rhs length must equal the number of rows");
    let n = m.cols;
    let mut aug = FieldMatrix::from_fn(m.rows, n + 1, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else {
            rhs[i].clone()
        }
    });
    let ech = echelon(&mut aug, n, opts);
    let rank = ech.pivots.len();
    let tol = opts.zero_tol * aug.max_magnitude().max(1.0);
    let inconsistent = (rank..m.rows).any(|i| !aug[(i, n)].is_negligible(tol));
    if inconsistent {
        return SolutionSet {
            kind: SolutionKind::Inconsistent,
            particular: None,
            nullspace_basis: Vec::new(),
            free_names: Vec::new(),
            free_columns: Vec::new(),
        };
    }

    let mut is_pivot = vec![false; n];
    let mut particular = vec![S::zero(); n];
    for &(r, c) in &ech.pivots {
        is_pivot[c] = true;
        particular[c] = aug[(r, n)].clone();
    }
    let free_columns: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let nullspace_basis = free_columns
        .iter()
        .map(|&f| {
            let mut v = vec![S::zero(); n];
            v[f] = S::one();
            for &(r, c) in &ech.pivots {
                v[c] = -aug[(r, f)].clone();
            }
            v
        })
        .collect::<Vec<_>>();
    SolutionSet {
        kind: if free_columns.is_empty() { SolutionKind::Unique } else { SolutionKind::Parametric },
        particular: Some(particular),
        free_names: parameter_names(free_columns.len()),
        nullspace_basis,
        free_columns,
    }
}

pub fn rank<S: Scalar>(m: &FieldMatrix<S>) -> usize {
    rank_with(m, &ReduceOptions::default())
}

pub fn rank_with<S: Scalar>(m: &FieldMatrix<S>, opts: &ReduceOptions) -> usize {
    let mut work = m.clone();
    echelon(&mut work, m.cols, opts).pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn int_matrix(rows: &[&[i64]]) -> FieldMatrix<Rational> {
        FieldMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect())
    }

    #[test]
    fn identity_gives_rhs() {
        let v = vec![q(3, 1), q(-1, 2), q(0, 1)];
        let s = row_reduce(&FieldMatrix::identity(3), &v);
        assert_eq!(s.kind, SolutionKind::Unique);
        assert_eq!(s.particular, Some(v));
    }

    #[test]
    fn two_by_two_unique() {
        let s = row_reduce(&int_matrix(&[&[1, 2], &[3, 4]]), &[q(1, 1), q(0, 1)]);
        assert_eq!(s.kind, SolutionKind::Unique);
        assert_eq!(s.particular, Some(vec![q(-2, 1), q(3, 2)]));
    }

    #[test]
    fn contradictory_rows() {
        let s = row_reduce(&int_matrix(&[&[1, 1], &[1, 1]]), &[q(0, 1), q(1, 1)]);
        assert_eq!(s.kind, SolutionKind::Inconsistent);
        assert!(s.particular.is_none());
    }

    #[test]
    fn parametric_names_and_membership() {
        let m = int_matrix(&[&[1, 2, 3], &[2, 4, 6]]);
        let rhs = [q(6, 1), q(12, 1)];
        let s = row_reduce(&m, &rhs);
        assert_eq!(s.kind, SolutionKind::Parametric);
        assert_eq!(s.free_names, vec!["C0", "C1"]);
        for t in [[q(-1, 1), q(1, 1)], [q(0, 1), q(0, 1)], [q(1, 1), q(-1, 1)]] {
            assert_eq!(m.mul_vec(&s.point(&t).unwrap()), rhs.to_vec());
        }
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&FieldMatrix::<Rational>::identity(4)), 4);
        assert_eq!(rank(&FieldMatrix::<Rational>::zeros(3, 2)), 0);
        assert_eq!(rank(&int_matrix(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn float_threshold() {
        let m = FieldMatrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0 + 1e-15]]);
        assert_eq!(rank(&m), 1);
        let loose = ReduceOptions { zero_tol: 1e-18 };
        assert_eq!(rank_with(&m, &loose), 2);
    }

    #[test]
    fn inverse_round_trip() {
        let m = int_matrix(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), FieldMatrix::identity(3));
        assert_eq!(inv.matmul(&m), FieldMatrix::identity(3));
        assert!(int_matrix(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn float_pivoting_picks_largest() {
        let m = FieldMatrix::from_rows(vec![vec![1e-3, 1.0], vec![1.0, 1.0]]);
        let s = row_reduce(&m, &[1.0, 2.0]);
        let x = s.particular.unwrap();
        assert!((x[0] - 1000.0 / 999.0).abs() < 1e-12);
        assert!((x[1] - 998.0 / 999.0).abs() < 1e-12);
    }
}
