use std::fmt;

use super::quasidet::{quasi_inverse, MAX_QUASIDET_SIZE};
use super::{AlgebraSolution, AlgebraSolutionKind, SolveError, SylvesterSystem};
use crate::algebra::{Algebra, AlgebraError, AlgebraRef, Element};
use crate::linalg::{parameter_names, rank, FieldMatrix, ReduceOptions};
use crate::parser::format_element;
use crate::scalar::Scalar;

/// Matrix with entries in an algebra.
#[derive(Clone, PartialEq)]
pub struct AMatrix<S: Scalar> {
    alg: AlgebraRef<S>,
    rows: usize,
    cols: usize,
    data: Vec<Element<S>>,
}

impl<S: Scalar> AMatrix<S> {
    pub fn zeros(alg: &AlgebraRef<S>, rows: usize, cols: usize) -> Self {
        AMatrix { alg: alg.clone(), rows, cols, data: vec![Element::zero(alg); rows * cols] }
    }

    pub fn identity(alg: &AlgebraRef<S>, n: usize) -> Self {
        let mut m = Self::zeros(alg, n, n);
        for i in 0..n {
            m.set(i, i, Element::one(alg));
        }
        m
    }

    pub fn from_rows(alg: &AlgebraRef<S>, rows: Vec<Vec<Element<S>>>) -> Result<Self, SolveError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(SolveError::Shape("ragged matrix".into()));
        }
        if rows.iter().flatten().any(|e| !Algebra::same(alg, e.algebra())) {
            return Err(AlgebraError::AlgebraMismatch.into());
        }
        let n_rows = rows.len();
        Ok(AMatrix { alg: alg.clone(), rows: n_rows, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn algebra(&self) -> &AlgebraRef<S> {
        &self.alg
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Element<S> {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Element<S>) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Element<S>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.alg, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// `(M·y)_r = Σ_c m_rc y_c`, coefficients on the left.
    pub fn mul_vec(&self, y: &[Element<S>]) -> Vec<Element<S>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(y).fold(Element::zero(&self.alg), |acc, (m, v)| acc + m * v))
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape");
        let mut out = Self::zeros(&self.alg, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let v = (0..self.cols).fold(Element::zero(&self.alg), |acc, k| acc + self.get(r, k) * other.get(k, c));
                out.set(r, c, v);
            }
        }
        out
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(Element::norm).fold(0.0, f64::max)
    }
}

impl<S: Scalar> fmt::Debug for AMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(format_element).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// How the enlarged matrix is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Layout {
    /// One row per equation `(i, l)`, one column per unknown `(j, p)`.
    #[default]
    EquationRows,
    /// The transpose: one column per equation.
    EquationColumns,
}

/// The enlarged system `Σ_{(j,p)} a[(i,l)][(j,p)] x^j_p = b^i e_l` with
/// `x^j_p = x^j e_p` treated as independent unknowns.
#[derive(Clone, Debug)]
pub struct RichardsonSystem<S: Scalar> {
    alg: AlgebraRef<S>,
    m_eq: usize,
    m_unk: usize,
    layout: Layout,
    amat: AMatrix<S>,
    brhs: Vec<Element<S>>,
}

impl<S: Scalar> RichardsonSystem<S> {
    pub fn algebra(&self) -> &AlgebraRef<S> {
        &self.alg
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn m_eq(&self) -> usize {
        self.m_eq
    }

    pub fn m_unk(&self) -> usize {
        self.m_unk
    }

    /// The matrix in its stored layout.
    pub fn amat(&self) -> &AMatrix<S> {
        &self.amat
    }

    pub fn brhs(&self) -> &[Element<S>] {
        &self.brhs
    }

    /// Coefficient of `x^j_p` in equation `(i, l)`, whatever the layout.
    pub fn coefficient(&self, i: usize, l: usize, j: usize, p: usize) -> &Element<S> {
        let n = self.alg.dim();
        let (row, col) = (i * n + l, j * n + p);
        match self.layout {
            Layout::EquationRows => self.amat.get(row, col),
            Layout::EquationColumns => self.amat.get(col, row),
        }
    }

    /// The matrix with one row per equation.
    pub fn equation_matrix(&self) -> AMatrix<S> {
        match self.layout {
            Layout::EquationRows => self.amat.clone(),
            Layout::EquationColumns => self.amat.transpose(),
        }
    }
}

pub fn build_richardson<S: Scalar>(system: &SylvesterSystem<S>) -> RichardsonSystem<S> {
    build_richardson_with(system, Layout::EquationRows)
}

/// Writes each block as `f∘x = Σ_k a^k x e_k` with `a^k = Σ_r f^{rk} e_r`,
/// multiplies equation `i` by `e_l` on the right and expands
/// `e_k e_l = C^p_kl e_p`, giving the coefficient `Σ_k C^p_kl a^k` of `x e_p`.
pub fn build_richardson_with<S: Scalar>(system: &SylvesterSystem<S>, layout: Layout) -> RichardsonSystem<S> {
    let alg = system.algebra();
    let n = alg.dim();
    let (m_eq, m_unk) = (system.m_eq(), system.m_unk());
    let mut amat = AMatrix::zeros(alg, m_eq * n, m_unk * n);
    for i in 0..m_eq {
        for j in 0..m_unk {
            let f = system.op(i, j).coeff();
            let left_factors: Vec<Vec<S>> = (0..n).map(|k| (0..n).map(|r| f[(r, k)].clone()).collect()).collect();
            for l in 0..n {
                let mut row_coords = vec![vec![S::zero(); n]; n];
                for k in 0..n {
                    for (p, c) in alg.product_terms(k, l) {
                        for (acc, a) in row_coords[*p].iter_mut().zip(&left_factors[k]) {
                            *acc = acc.clone() + c.clone() * a.clone();
                        }
                    }
                }
                for (p, coords) in row_coords.into_iter().enumerate() {
                    amat.set(i * n + l, j * n + p, Element::new(alg, coords).expect("n coordinates"));
                }
            }
        }
    }
    let brhs = system
        .rhs()
        .iter()
        .flat_map(|b| (0..n).map(move |l| b * Element::basis(b.algebra(), l)))
        .collect();
    let amat = match layout {
        Layout::EquationRows => amat,
        Layout::EquationColumns => amat.transpose(),
    };
    RichardsonSystem { alg: alg.clone(), m_eq, m_unk, layout, amat, brhs }
}

/// General solution of an eliminated enlarged system: unknown `c` equals
/// `particular[c] + Σ coeff · C_param` with algebra-valued parameters
/// multiplied on the right.
#[derive(Clone, Debug, PartialEq)]
pub struct EnlargedSolution<S: Scalar> {
    pub particular: Vec<Element<S>>,
    pub terms: Vec<Vec<(usize, Element<S>)>>,
    pub free_names: Vec<String>,
}

impl<S: Scalar> EnlargedSolution<S> {
    /// Values of all unknowns at the given parameter values.
    pub fn value(&self, params: &[Element<S>]) -> Vec<Element<S>> {
        self.particular
            .iter()
            .zip(&self.terms)
            .map(|(base, terms)| terms.iter().fold(base.clone(), |acc, (k, c)| acc + c * &params[*k]))
            .collect()
    }

    pub fn is_unique(&self) -> bool {
        self.free_names.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EnlargedOutcome<S: Scalar> {
    Inconsistent,
    Solved(EnlargedSolution<S>),
}

pub fn nc_row_reduce<S: Scalar>(amat: &AMatrix<S>, brhs: &[Element<S>]) -> Result<EnlargedOutcome<S>, SolveError> {
    nc_row_reduce_with(amat, brhs, &ReduceOptions::default())
}

/// Gauss-Jordan elimination over the algebra. Pivot rows are multiplied on
/// the left by the pivot's inverse and left multiples of them are
/// subtracted from the other rows.
pub fn nc_row_reduce_with<S: Scalar>(
    amat: &AMatrix<S>,
    brhs: &[Element<S>],
    opts: &ReduceOptions,
) -> Result<EnlargedOutcome<S>, SolveError> {
    if brhs.len() != amat.rows() {
        return Err(SolveError::Shape(format!("{} rows but {} right-hand entries", amat.rows(), brhs.len())));
    }
    let (rows, cols) = (amat.rows(), amat.cols());
    let mut m: Vec<Vec<Element<S>>> = (0..rows).map(|r| amat.row(r).to_vec()).collect();
    let mut b = brhs.to_vec();
    let scale = amat.max_norm().max(1.0);
    let tol = if S::is_exact() { 0.0 } else { opts.zero_tol * scale };
    let is_zero = |e: &Element<S>| e.is_negligible(tol);

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let candidates: Vec<usize> = (r..rows).filter(|&q| !is_zero(&m[q][c])).collect();
        if candidates.is_empty() {
            continue;
        }
        let ordered: Vec<usize> = if S::is_exact() {
            candidates
        } else {
            let mut by_size = candidates;
            by_size.sort_by(|&p, &q| m[q][c].norm().total_cmp(&m[p][c].norm()));
            by_size
        };
        let (p, inv) = ordered
            .iter()
            .find_map(|&q| m[q][c].inverse_with(opts).ok().map(|inv| (q, inv)))
            .ok_or_else(|| SolveError::PivotNotInvertible(format_element(&m[ordered[0]][c])))?;
        m.swap(r, p);
        b.swap(r, p);
        for v in m[r][c..].iter_mut() {
            *v = &inv * &*v;
        }
        b[r] = &inv * &b[r];
        m[r][c] = Element::one(amat.algebra());
        for q in 0..rows {
            if q == r || is_zero(&m[q][c]) {
                continue;
            }
            let factor = m[q][c].clone();
            for k in c..cols {
                let delta = &factor * &m[r][k];
                m[q][k] = &m[q][k] - delta;
            }
            let delta = &factor * &b[r];
            b[q] = &b[q] - delta;
            m[q][c] = Element::zero(amat.algebra());
        }
        pivots.push(c);
        r += 1;
    }
    let b_scale = b.iter().map(Element::norm).fold(scale, f64::max);
    let b_tol = if S::is_exact() { 0.0 } else { opts.zero_tol * b_scale };
    if b[r..].iter().any(|e| !e.is_negligible(b_tol)) {
        return Ok(EnlargedOutcome::Inconsistent);
    }

    let alg = amat.algebra();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut particular = vec![Element::zero(alg); cols];
    let mut terms = vec![Vec::new(); cols];
    for (k, &f) in free.iter().enumerate() {
        terms[f].push((k, Element::one(alg)));
    }
    for (row, &pc) in pivots.iter().enumerate() {
        particular[pc] = b[row].clone();
        for (k, &f) in free.iter().enumerate() {
            if !is_zero(&m[row][f]) {
                terms[pc].push((k, -&m[row][f]));
            }
        }
    }
    Ok(EnlargedOutcome::Solved(EnlargedSolution { particular, terms, free_names: parameter_names(free.len()) }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Elimination,
    /// Inverse through quasideterminants for small square systems, with
    /// elimination as the fallback.
    Quasideterminant,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RichardsonOptions {
    pub engine: Engine,
    pub layout: Layout,
    pub reduce: ReduceOptions,
}

pub fn solve_richardson<S: Scalar>(system: &SylvesterSystem<S>) -> Result<AlgebraSolution<S>, SolveError> {
    solve_richardson_with(system, &RichardsonOptions::default())
}

/// Solves the enlarged system, reads off `x^j = x^j_0` and substitutes it
/// into the original equations.
///
/// A family with free parameters is affine over the base field, so it is
/// checked at `C = 0` and at each `C_k = e_p`.
pub fn solve_richardson_with<S: Scalar>(
    system: &SylvesterSystem<S>,
    opts: &RichardsonOptions,
) -> Result<AlgebraSolution<S>, SolveError> {
    let rs = build_richardson_with(system, opts.layout);
    let a = rs.equation_matrix();
    let alg = system.algebra();
    let n = alg.dim();

    let mut outcome = None;
    if opts.engine == Engine::Quasideterminant && a.rows() == a.cols() && a.rows() <= MAX_QUASIDET_SIZE {
        if let Ok(inv) = quasi_inverse(&a) {
            let particular = inv.mul_vec(rs.brhs());
            let terms = vec![Vec::new(); particular.len()];
            outcome = Some(EnlargedOutcome::Solved(EnlargedSolution { particular, terms, free_names: Vec::new() }));
        }
    }
    let outcome = match outcome {
        Some(o) => o,
        None => nc_row_reduce_with(&a, rs.brhs(), &opts.reduce)?,
    };
    let enlarged = match outcome {
        EnlargedOutcome::Inconsistent => return Ok(AlgebraSolution::inconsistent()),
        EnlargedOutcome::Solved(e) => e,
    };

    let m_unk = system.m_unk();
    let x: Vec<Element<S>> = (0..m_unk).map(|j| enlarged.particular[j * n].clone()).collect();
    let residuals = system.residuals(&x)?;
    let mut verified = system.is_satisfied_by(&x)?;

    let mut used: Vec<usize> = (0..m_unk).flat_map(|j| enlarged.terms[j * n].iter().map(|(k, _)| *k)).collect();
    used.sort_unstable();
    used.dedup();
    let mut nullspace: Vec<Vec<Element<S>>> = Vec::new();
    for &k in &used {
        for p in 0..n {
            let e_p = Element::basis(alg, p);
            let dir: Vec<Element<S>> = (0..m_unk)
                .map(|j| {
                    enlarged.terms[j * n]
                        .iter()
                        .filter(|(t, _)| *t == k)
                        .fold(Element::zero(alg), |acc, (_, c)| acc + c * &e_p)
                })
                .collect();
            let shifted: Vec<Element<S>> = x.iter().zip(&dir).map(|(a, d)| a + d).collect();
            verified &= system.is_satisfied_by(&shifted)?;
            if extends_basis(&nullspace, &dir) {
                nullspace.push(dir);
            }
        }
    }
    let kind = match (verified, nullspace.is_empty()) {
        (false, _) => AlgebraSolutionKind::UnverifiedEnlarged,
        (true, true) => AlgebraSolutionKind::Unique,
        (true, false) => AlgebraSolutionKind::Parametric,
    };
    let free_names = if kind == AlgebraSolutionKind::Parametric { parameter_names(nullspace.len()) } else { Vec::new() };
    if kind != AlgebraSolutionKind::Parametric {
        nullspace.clear();
    }
    Ok(AlgebraSolution { kind, x, nullspace, free_names, residuals, enlarged: Some(enlarged) })
}

/// Whether `dir` is independent of `basis` over the base field.
fn extends_basis<S: Scalar>(basis: &[Vec<Element<S>>], dir: &[Element<S>]) -> bool {
    let flat = |v: &[Element<S>]| -> Vec<S> { v.iter().flat_map(|e| e.coords().iter().cloned()).collect() };
    let mut rows: Vec<Vec<S>> = basis.iter().map(|v| flat(v)).collect();
    let before = if rows.is_empty() { 0 } else { rank(&FieldMatrix::from_rows(rows.clone())) };
    rows.push(flat(dir));
    rank(&FieldMatrix::from_rows(rows)) > before
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::quaternion_algebra;
    use crate::parser::parse_element;
    use crate::scalar::Rational;

    type Q = Rational;

    fn h() -> AlgebraRef<Q> {
        quaternion_algebra()
    }

    fn el(t: &str) -> Element<Q> {
        parse_element(t, &h()).unwrap()
    }

    fn row(items: &[&str]) -> Vec<Element<Q>> {
        items.iter().map(|t| el(t)).collect()
    }

    fn sylvester(terms: &[(&str, &str)], rhs: &str) -> SylvesterSystem<Q> {
        let terms: Vec<_> = terms.iter().map(|(a, b)| (el(a), 0, el(b))).collect();
        SylvesterSystem::builder(&h(), 1).equation(&terms, el(rhs)).unwrap().build().unwrap()
    }

    fn example_one() -> SylvesterSystem<Q> {
        sylvester(&[("i+j", "k"), ("k", "j+k")], "1+k")
    }

    #[test]
    fn enlarged_matrix_rows_match_the_expanded_equations() {
        let rs = build_richardson(&example_one());
        let expected = AMatrix::from_rows(
            &h(),
            vec![
                row(&["0", "0", "k", "i+j+k"]),
                row(&["0", "0", "i+j+k", "-k"]),
                row(&["-k", "-i-j-k", "0", "0"]),
                row(&["-i-j-k", "k", "0", "0"]),
            ],
        )
        .unwrap();
        assert_eq!(rs.amat(), &expected);
        assert_eq!(rs.brhs(), row(&["1+k", "i+j", "-i+j", "-1+k"]).as_slice());
    }

    #[test]
    fn column_layout_is_the_transpose() {
        let rows = build_richardson(&example_one());
        let cols = build_richardson_with(&example_one(), Layout::EquationColumns);
        assert_eq!(cols.amat(), &rows.amat().transpose());
        assert_eq!(cols.coefficient(0, 0, 0, 3), &el("i+j+k"));
        assert_eq!(cols.amat().get(3, 0), &el("i+j+k"));
    }

    #[test]
    fn second_example_matrix() {
        let rs = build_richardson(&sylvester(&[("i+j", "k"), ("k", "j+1")], "1+k"));
        let expected = AMatrix::from_rows(
            &h(),
            vec![
                row(&["k", "0", "k", "i+j"]),
                row(&["0", "k", "i+j", "-k"]),
                row(&["-k", "-i-j", "k", "0"]),
                row(&["-i-j", "k", "0", "k"]),
            ],
        )
        .unwrap();
        assert_eq!(rs.amat(), &expected);
    }

    #[test]
    fn identity_equation_gives_identity_pattern() {
        let rs = build_richardson(&sylvester(&[("1", "1")], "2+i"));
        assert_eq!(rs.amat(), &AMatrix::identity(&h(), 4));
    }

    #[test]
    fn elimination_reproduces_auxiliary_values() {
        let rs = build_richardson(&example_one());
        let EnlargedOutcome::Solved(s) = nc_row_reduce(rs.amat(), rs.brhs()).unwrap() else {
            panic!("expected a solution")
        };
        assert!(s.is_unique());
        assert_eq!(s.particular, row(&["-1/2 - 1/2j", "-1/2i + 1/2k", "1/2 - 1/2j", "-1/2i - 1/2k"]));
    }

    #[test]
    fn diagonal_system_left_divides() {
        let a = AMatrix::from_rows(&h(), vec![row(&["i", "0"]), row(&["0", "1+j"])]).unwrap();
        let EnlargedOutcome::Solved(s) = nc_row_reduce(&a, &row(&["k", "1"])).unwrap() else { panic!() };
        assert_eq!(s.particular, vec![el("-i") * el("k"), el("1/2 - 1/2j")]);
    }

    #[test]
    fn free_unknowns_get_parameters() {
        let a = AMatrix::from_rows(&h(), vec![row(&["1", "i"])]).unwrap();
        let EnlargedOutcome::Solved(s) = nc_row_reduce(&a, &row(&["j"])).unwrap() else { panic!() };
        assert_eq!(s.free_names, vec!["C0"]);
        let c = el("1 + k");
        let values = s.value(&[c.clone()]);
        assert_eq!(values[1], c);
        assert_eq!(&values[0] + el("i") * &values[1], el("j"));
    }

    #[test]
    fn richardson_solutions() {
        let s = solve_richardson(&example_one()).unwrap();
        assert_eq!(s.kind, AlgebraSolutionKind::Unique);
        assert_eq!(s.x, vec![el("-1/2 - 1/2j")]);

        let s = solve_richardson(&sylvester(&[("i+j", "k"), ("k", "j+1")], "1+k")).unwrap();
        assert_eq!(s.kind, AlgebraSolutionKind::Inconsistent);

        let s = solve_richardson(&sylvester(&[("i+j", "k"), ("k", "j+1")], "j-k")).unwrap();
        assert_eq!(s.kind, AlgebraSolutionKind::UnverifiedEnlarged);
        assert!(s.residuals.iter().any(|r| !r.is_zero()));
    }

    #[test]
    fn layouts_and_engines_agree() {
        let sys = example_one();
        let reference = solve_richardson(&sys).unwrap().x;
        for layout in [Layout::EquationRows, Layout::EquationColumns] {
            for engine in [Engine::Elimination, Engine::Quasideterminant] {
                let opts = RichardsonOptions { engine, layout, ..Default::default() };
                assert_eq!(solve_richardson_with(&sys, &opts).unwrap().x, reference);
            }
        }
    }

    #[test]
    fn non_division_algebra_pivot() {
        // split-complex numbers: j^2 = 1, so 1 + j is a zero divisor
        let c = |v: [i64; 2]| v.map(Q::from_i64).to_vec();
        let alg = Algebra::new("split", vec![vec![c([1, 0]), c([0, 1])], vec![c([0, 1]), c([1, 0])]], vec![])
            .unwrap();
        let p = Element::from_ints(&alg, &[1, 1]);
        let a = AMatrix::from_rows(&alg, vec![vec![p.clone()]]).unwrap();
        let err = nc_row_reduce(&a, &[p]).unwrap_err();
        assert!(matches!(err, SolveError::PivotNotInvertible(_)));
    }
}
