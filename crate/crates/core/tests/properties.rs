mod common;

use common::props;

const CASES: u32 = 256;

fn check(result: Result<(), String>) {
    if let Err(e) = result {
        panic!("{e}");
    }
}

#[test]
fn associativity() {
    check(props::associativity(CASES));
}

#[test]
fn compose_matches_apply() {
    check(props::compose_apply(CASES));
}

#[test]
fn operator_matrix_is_multiplicative() {
    check(props::operator_matrix_multiplicative(CASES));
}

#[test]
fn inverse_is_two_sided() {
    check(props::inverse_is_two_sided(CASES));
}

#[test]
fn single_term_equation() {
    check(props::sylvester_oracle(CASES));
}

#[test]
fn format_and_parse_round_trip() {
    check(props::parser_round_trip(CASES));
}

#[test]
fn derivative_finite_difference() {
    check(props::finite_difference(CASES));
}

#[test]
fn linear_normalization_round_trip() {
    check(props::linear_normalization_round_trip(CASES));
}

#[test]
fn polynomial_normalization_preserves_values() {
    check(props::polynomial_matches_direct_evaluation(CASES));
}

#[test]
fn enlarged_elimination() {
    check(props::elimination_solves_invertible_systems(CASES));
}

#[test]
fn field_solutions_satisfy_systems() {
    check(props::field_solutions_substitute(CASES));
}

#[test]
fn simple_tensor_inverse_factors() {
    use common::*;
    use proptest::prelude::*;
    check(props::run(CASES, (nonzero_quat(3), nonzero_quat(3)), |(a, b)| {
        let f = ncalg::TensorOp::simple(&a, &b).unwrap();
        let expected = ncalg::TensorOp::simple(&a.inverse().unwrap(), &b.inverse().unwrap()).unwrap();
        prop_assert_eq!(f.invert().unwrap(), expected);
        Ok(())
    }));
}
