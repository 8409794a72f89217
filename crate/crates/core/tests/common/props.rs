//! Randomized properties, shared by the property test target and the
//! acceptance runner.

use std::collections::HashMap;

use ncalg::linalg::rank;
use ncalg::newton::GeneralizedPolynomial;
use ncalg::parser::{evaluate, parse_expression};
use ncalg::solvers::{nc_row_reduce, quasi_inverse, solve_field, AMatrix, AlgebraSolutionKind, EnlargedOutcome};
use ncalg::{
    format_element, normalize_linear, normalize_poly, parse_element, parse_equation, quaternion_algebra,
    collect_unknowns, Element, SylvesterSystem, TensorError, TensorOp,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use super::*;

pub fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn tensor() -> impl Strategy<Value = TensorOp<Q>> {
    prop::collection::vec((small_quat(2), small_quat(2)), 1..=3)
        .prop_map(|pairs| TensorOp::from_pairs(&h(), &pairs).unwrap())
}

pub fn associativity(cases: u32) -> Result<(), String> {
    run(cases, (rational_quat(), rational_quat(), rational_quat()), |(a, b, c)| {
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!((&a + &b) * &c, &a * &c + &b * &c);
        Ok(())
    })
}

pub fn compose_apply(cases: u32) -> Result<(), String> {
    run(cases, (tensor(), tensor(), rational_quat()), |(f, g, x)| {
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.apply(&x).unwrap(), f.apply(&g.apply(&x).unwrap()).unwrap());
        Ok(())
    })
}

pub fn operator_matrix_multiplicative(cases: u32) -> Result<(), String> {
    run(cases, (tensor(), tensor()), |(f, g)| {
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.operator_matrix(), f.operator_matrix().matmul(&g.operator_matrix()));
        Ok(())
    })
}

pub fn inverse_is_two_sided(cases: u32) -> Result<(), String> {
    run(cases, (tensor(), rational_quat()), |(f, x)| {
        let full_rank = rank(&f.operator_matrix()) == 4;
        match f.invert() {
            Ok(g) => {
                prop_assert!(full_rank);
                let id = TensorOp::identity(&h());
                prop_assert_eq!(f.compose(&g).unwrap(), id.clone());
                prop_assert_eq!(g.compose(&f).unwrap(), id);
                prop_assert_eq!(f.apply(&g.apply(&x).unwrap()).unwrap(), x);
            }
            Err(TensorError::SingularTensor) => prop_assert!(!full_rank),
            Err(e) => return Err(TestCaseError::fail(format!("unexpected {e}"))),
        }
        Ok(())
    })
}

pub fn sylvester_oracle(cases: u32) -> Result<(), String> {
    run(cases, (nonzero_quat(3), nonzero_quat(3), rational_quat()), |(a, b, c)| {
        let sys = SylvesterSystem::builder(&h(), 1).equation(&[(a.clone(), 0, b.clone())], c.clone()).unwrap().build().unwrap();
        let sol = solve_field(&sys);
        prop_assert_eq!(sol.kind, AlgebraSolutionKind::Unique);
        let expected = a.inverse().unwrap() * c * b.inverse().unwrap();
        prop_assert_eq!(&sol.x[0], &expected);
        Ok(())
    })
}

pub fn parser_round_trip(cases: u32) -> Result<(), String> {
    run(cases, rational_quat(), |x| {
        let text = format_element(&x);
        prop_assert_eq!(parse_element(&text, &h()).unwrap(), x, "text {}", text);
        Ok(())
    })
}

/// Polynomial with coefficient coordinates in `[-1/2, 1/2)` and degree up to 3.
fn small_polynomial() -> impl Strategy<Value = GeneralizedPolynomial<f64>> {
    prop::collection::vec(prop::collection::vec(float_quat(0.5), 2..=4), 1..=3)
        .prop_map(|monos| GeneralizedPolynomial::new(&quaternion_algebra(), monos).unwrap())
}

pub fn finite_difference(cases: u32) -> Result<(), String> {
    let t = 1e-6;
    run(cases, (small_polynomial(), float_quat(0.5), float_quat(0.5)), move |(p, x0, dir)| {
        let d = p.derivative_at(&x0).unwrap();
        let shifted = &x0 + dir.scale(&t);
        let quotient = (p.eval(&shifted).unwrap() - p.eval(&x0).unwrap()).scale(&(1.0 / t));
        let err = (quotient - d.apply(&dir).unwrap()).norm();
        prop_assert!(err <= 10.0 * t, "error {err:e}");
        Ok(())
    })
}

fn render_term(a: &Element<Q>, var: &str, b: &Element<Q>) -> String {
    format!("({})*{var}*({})", format_element(a), format_element(b))
}

pub fn linear_normalization_round_trip(cases: u32) -> Result<(), String> {
    let terms = prop::collection::vec((small_quat(2), 0usize..2, small_quat(2)), 1..=4);
    run(cases, (terms, small_quat(3)), |(terms, rhs)| {
        let names = ["x1".to_string(), "x2".to_string()];
        let text = terms.iter().map(|(a, v, b)| render_term(a, &names[*v], b)).collect::<Vec<_>>().join(" + ");
        let text = format!("{text} + x1*0 + x2*0 = {}", format_element(&rhs));
        let expected = SylvesterSystem::builder(&h(), 2).equation(&terms, rhs).unwrap().build().unwrap();
        let eq = parse_equation(&text, h().basis_names()).unwrap();
        let unknowns = collect_unknowns(std::slice::from_ref(&eq)).unwrap();
        prop_assert_eq!(&unknowns, &names.to_vec());
        prop_assert_eq!(normalize_linear(&[eq], &unknowns, &h()).unwrap(), expected);
        Ok(())
    })
}

/// Text of one side of a polynomial equation in `x`.
fn polynomial_side() -> impl Strategy<Value = String> {
    let monomial = prop::collection::vec(small_quat(2), 1..=4)
        .prop_map(|cs| cs.iter().map(|c| format!("({})", format_element(c))).collect::<Vec<_>>().join("*x*"));
    prop::collection::vec(monomial, 1..=3).prop_map(|ms| ms.join(" - "))
}

pub fn polynomial_matches_direct_evaluation(cases: u32) -> Result<(), String> {
    run(cases, (polynomial_side(), polynomial_side(), prop::collection::vec(rational_quat(), 5)), |(lhs, rhs, points)| {
        let text = format!("{lhs} = {rhs}");
        let eq = parse_equation(&text, h().basis_names()).unwrap();
        let (p, target) = normalize_poly(&eq, "x", &h(), 8).unwrap();
        let diff = parse_expression(&format!("({lhs}) - ({rhs})"), h().basis_names()).unwrap();
        for x in points {
            let env = HashMap::from([("x".to_string(), x.clone())]);
            let direct = evaluate(&diff, &h(), &env).unwrap();
            prop_assert_eq!(p.eval(&x).unwrap() - &target, direct, "{}", text);
        }
        Ok(())
    })
}

fn amatrix(entries: &[Element<Q>], n: usize) -> AMatrix<Q> {
    AMatrix::from_rows(&h(), entries.chunks(n).map(<[_]>::to_vec).collect()).unwrap()
}

pub fn elimination_solves_invertible_systems(cases: u32) -> Result<(), String> {
    let entries = prop::collection::vec(small_quat(2), 9 + 4);
    run(cases, (entries, prop::collection::vec(small_quat(2), 3)), |(entries, b)| {
        let a = amatrix(&entries[..9], 3);
        if let EnlargedOutcome::Solved(s) = nc_row_reduce(&a, &b).unwrap() {
            if s.is_unique() {
                prop_assert_eq!(a.mul_vec(&s.particular), b.clone());
            }
        }
        let small = amatrix(&entries[9..], 2);
        if let EnlargedOutcome::Solved(s) = nc_row_reduce(&small, &b[..2]).unwrap() {
            if s.is_unique() {
                let inv = quasi_inverse(&small).unwrap();
                prop_assert_eq!(inv.mul_vec(&b[..2]), s.particular);
            }
        }
        Ok(())
    })
}

pub fn field_solutions_substitute(cases: u32) -> Result<(), String> {
    run(cases, any::<u64>(), |seed| {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = 1 + (seed % 2) as usize;
        let sys = random_system(&mut rng, m);
        let sol = solve_field(&sys);
        if sol.is_solved() {
            prop_assert!(sol.residuals.iter().all(Element::is_zero));
            let params: Vec<Q> = (0..sol.nullspace.len()).map(|k| <Q as ncalg::Scalar>::from_i64(k as i64 - 1)).collect();
            prop_assert!(sys.is_satisfied_by(&sol.point(&params)).unwrap());
        }
        if sys.m_unk() == 1 {
            if let Ok(g) = sys.op(0, 0).invert() {
                prop_assert_eq!(sol.kind, AlgebraSolutionKind::Unique);
                prop_assert_eq!(&sol.x[0], &g.apply(&sys.rhs()[0]).unwrap());
            }
        }
        Ok(())
    })
}

pub type Property = (&'static str, fn(u32) -> Result<(), String>);

pub const ALL: &[Property] = &[
    ("quaternion structural constants are associative", associativity),
    ("compose agrees with apply", compose_apply),
    ("operator_matrix is multiplicative", operator_matrix_multiplicative),
    ("invert gives a two-sided identity", inverse_is_two_sided),
    ("a*x*b = c solves to inv(a)*c*inv(b)", sylvester_oracle),
    ("format_element round-trips through the parser", parser_round_trip),
    ("derivative matches finite differences (float, t = 1e-6)", finite_difference),
    ("normalize_linear reproduces programmatic systems", linear_normalization_round_trip),
    ("normalized polynomials match direct evaluation", polynomial_matches_direct_evaluation),
    ("elimination and quasideterminant inverse solve A*y = b", elimination_solves_invertible_systems),
    ("field solutions satisfy their systems", field_solutions_substitute),
];
