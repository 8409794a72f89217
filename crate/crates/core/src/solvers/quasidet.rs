use std::collections::HashMap;
use std::rc::Rc;

use super::richardson::AMatrix;
use super::SolveError;
use crate::algebra::Element;
use crate::scalar::Scalar;

/// Largest square system the solver hands to the quasideterminant engine.
pub const MAX_QUASIDET_SIZE: usize = 6;

const MAX_INDEXED: usize = 64;

/// `|M|_ij = m_ij - r_i (M^{ij})^{-1} c_j`, where `M^{ij}` drops row `i` and
/// column `j`, `r_i` is row `i` without column `j` and `c_j` column `j`
/// without row `i`.
pub fn quasideterminant<S: Scalar>(m: &AMatrix<S>, i: usize, j: usize) -> Result<Element<S>, SolveError> {
    let mut q = Quasi::new(m)?;
    if i >= m.rows() || j >= m.cols() {
        return Err(SolveError::Shape(format!("entry ({i}, {j}) is outside the matrix")));
    }
    let all = full_mask(m.rows());
    q.quasideterminant(all, all, i, j).ok_or(SolveError::QuasideterminantUndefined)
}

/// Inverse with entries `(M^{-1})_ji = |M|_ij^{-1}`; an undefined
/// quasideterminant gives a zero entry. The product is verified.
pub fn quasi_inverse<S: Scalar>(m: &AMatrix<S>) -> Result<AMatrix<S>, SolveError> {
    let mut q = Quasi::new(m)?;
    let n = m.rows();
    let all = full_mask(n);
    let inv = q.inverse(all, all).ok_or(SolveError::QuasideterminantUndefined)?;
    let mut out = AMatrix::zeros(m.algebra(), n, n);
    for c in 0..n {
        for r in 0..n {
            out.set(c, r, inv[c * n + r].clone());
        }
    }
    Ok(out)
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn members(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask & (1 << b) != 0).collect()
}

struct Quasi<'a, S: Scalar> {
    m: &'a AMatrix<S>,
    zero_tol: f64,
    inverses: HashMap<(u64, u64), Option<Rc<Vec<Element<S>>>>>,
}

impl<'a, S: Scalar> Quasi<'a, S> {
    fn new(m: &'a AMatrix<S>) -> Result<Self, SolveError> {
        if m.rows() != m.cols() || m.rows() == 0 {
            return Err(SolveError::Shape("quasideterminants need a nonempty square matrix".into()));
        }
        if m.rows() > MAX_INDEXED {
            return Err(SolveError::Shape(format!("matrix larger than {MAX_INDEXED}x{MAX_INDEXED}")));
        }
        let zero_tol = if S::is_exact() { 0.0 } else { 1e-12 * m.max_norm().max(1.0) };
        Ok(Quasi { m, zero_tol, inverses: HashMap::new() })
    }

    fn quasideterminant(&mut self, rows: u64, cols: u64, i: usize, j: usize) -> Option<Element<S>> {
        let m = self.m;
        if rows.count_ones() == 1 {
            return Some(m.get(i, j).clone());
        }
        let (sub_rows, sub_cols) = (rows & !(1 << i), cols & !(1 << j));
        let inv = self.inverse(sub_rows, sub_cols)?;
        let (rs, cs) = (members(sub_rows), members(sub_cols));
        let k = rs.len();
        let mut acc = m.get(i, j).clone();
        for (ci, &c) in cs.iter().enumerate() {
            let left = m.get(i, c);
            if left.is_zero() {
                continue;
            }
            for (ri, &r) in rs.iter().enumerate() {
                let entry = &inv[ci * k + ri];
                if entry.is_zero() || m.get(r, j).is_zero() {
                    continue;
                }
                acc = acc - left * entry * m.get(r, j);
            }
        }
        Some(acc)
    }

    /// Inverse of the submatrix on `rows × cols`, stored column-index major:
    /// entry `(c, r)` at `c * k + r`.
    fn inverse(&mut self, rows: u64, cols: u64) -> Option<Rc<Vec<Element<S>>>> {
        if let Some(hit) = self.inverses.get(&(rows, cols)) {
            return hit.clone();
        }
        let result = self.compute_inverse(rows, cols).map(Rc::new);
        self.inverses.insert((rows, cols), result.clone());
        result
    }

    fn compute_inverse(&mut self, rows: u64, cols: u64) -> Option<Vec<Element<S>>> {
        let m = self.m;
        let alg = m.algebra();
        let (rs, cs) = (members(rows), members(cols));
        let k = rs.len();
        let mut inv = vec![Element::zero(alg); k * k];
        for (ri, &r) in rs.iter().enumerate() {
            for (ci, &c) in cs.iter().enumerate() {
                match self.quasideterminant(rows, cols, r, c) {
                    Some(q) if q.is_negligible(self.zero_tol) => return None,
                    Some(q) => inv[ci * k + ri] = q.inverse().ok()?,
                    None => {}
                }
            }
        }
        let tol = if S::is_exact() { 0.0 } else { 1e-9 };
        for (ri, &r) in rs.iter().enumerate() {
            for (rj, _) in rs.iter().enumerate() {
                let mut acc = Element::zero(alg);
                for (ci, &c) in cs.iter().enumerate() {
                    acc = acc + m.get(r, c) * &inv[ci * k + rj];
                }
                if ri == rj {
                    acc = acc - Element::one(alg);
                }
                if !acc.is_negligible(tol) {
                    return None;
                }
            }
        }
        Some(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{quaternion_algebra, AlgebraRef};
    use crate::parser::parse_element;
    use crate::scalar::Rational;

    type Q = Rational;

    fn h() -> AlgebraRef<Q> {
        quaternion_algebra()
    }

    fn mat(rows: &[&[&str]]) -> AMatrix<Q> {
        let rows = rows.iter().map(|r| r.iter().map(|t| parse_element(t, &h()).unwrap()).collect()).collect();
        AMatrix::from_rows(&h(), rows).unwrap()
    }

    #[test]
    fn one_by_one() {
        let m = mat(&[&["1+i"]]);
        assert_eq!(quasideterminant(&m, 0, 0).unwrap(), parse_element("1+i", &h()).unwrap());
    }

    #[test]
    fn quaternion_two_by_two() {
        let m = mat(&[&["i", "j"], &["k", "1"]]);
        assert!(quasideterminant(&m, 0, 0).unwrap().is_zero());
    }

    #[test]
    fn commuting_entries() {
        let m = mat(&[&["1", "2"], &["3", "4"]]);
        assert_eq!(quasideterminant(&m, 0, 0).unwrap(), parse_element("-1/2", &h()).unwrap());
    }

    #[test]
    fn undefined_when_minor_is_singular() {
        let m = mat(&[&["1", "2"], &["3", "0"]]);
        assert_eq!(quasideterminant(&m, 0, 0), Err(SolveError::QuasideterminantUndefined));
    }

    #[test]
    fn inverse_with_zero_entries() {
        let m = mat(&[&["0", "i"], &["j", "0"]]);
        let inv = quasi_inverse(&m).unwrap();
        assert_eq!(m.matmul(&inv), AMatrix::identity(&h(), 2));
        assert!(inv.get(0, 0).is_zero());
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = mat(&[&["i", "j"], &["k", "1"]]);
        assert!(quasi_inverse(&m).is_err());
    }

    #[test]
    fn three_by_three_round_trip() {
        let m = mat(&[&["1+i", "j", "0"], &["k", "2", "i"], &["1", "0", "1-j"]]);
        let inv = quasi_inverse(&m).unwrap();
        assert_eq!(m.matmul(&inv), AMatrix::identity(&h(), 3));
        assert_eq!(inv.matmul(&m), AMatrix::identity(&h(), 3));
    }
}
