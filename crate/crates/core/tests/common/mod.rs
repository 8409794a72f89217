#![allow(dead_code)]

use ncalg::solvers::SylvesterSystem;
use ncalg::{quaternion_algebra, AlgebraRef, Element, Rational, Scalar};
use proptest::prelude::*;
use rand::Rng;

pub mod props;

pub type Q = Rational;

pub fn h() -> AlgebraRef<Q> {
    quaternion_algebra()
}

pub fn el(text: &str) -> Element<Q> {
    ncalg::parse_element(text, &h()).unwrap()
}

pub fn quat(c: [i64; 4]) -> Element<Q> {
    Element::from_ints(&h(), &c)
}

/// Quaternion with integer coordinates in `-range..=range`.
pub fn small_quat(range: i64) -> impl Strategy<Value = Element<Q>> {
    prop::array::uniform4(-range..=range).prop_map(quat)
}

pub fn nonzero_quat(range: i64) -> impl Strategy<Value = Element<Q>> {
    small_quat(range).prop_filter("nonzero", |q| !q.is_zero())
}

/// Quaternion with rational coordinates `n/d`.
pub fn rational_quat() -> impl Strategy<Value = Element<Q>> {
    prop::array::uniform4((-9i64..=9, 1i64..=5)).prop_map(|c| {
        Element::new(&h(), c.iter().map(|&(n, d)| Q::from_ratio(n, d)).collect()).unwrap()
    })
}

pub fn float_quat(range: f64) -> impl Strategy<Value = Element<f64>> {
    prop::array::uniform4(-range..range)
        .prop_map(|c| Element::new(&quaternion_algebra(), c.to_vec()).unwrap())
}

pub fn random_quat(rng: &mut impl Rng, range: i64) -> Element<Q> {
    quat([0; 4].map(|_| rng.gen_range(-range..=range)))
}

/// Random `m × m` system with 1 to 3 terms `a·x_j·b` per entry.
pub fn random_system(rng: &mut impl Rng, m: usize) -> SylvesterSystem<Q> {
    let mut builder = SylvesterSystem::builder(&h(), m);
    for _ in 0..m {
        let mut terms = Vec::new();
        for j in 0..m {
            for _ in 0..rng.gen_range(1..=3) {
                terms.push((random_quat(rng, 2), j, random_quat(rng, 2)));
            }
        }
        builder = builder.equation(&terms, random_quat(rng, 3)).unwrap();
    }
    builder.build().unwrap()
}
