//! Quasideterminants of a quaternion matrix and the inverse they give.

use ncalg::solvers::{quasi_inverse, quasideterminant, AMatrix};
use ncalg::{format_element, parse_element, quaternion_algebra, Rational};

fn main() {
    let h = quaternion_algebra::<Rational>();
    let e = |t: &str| parse_element(t, &h).unwrap();
    let m = AMatrix::from_rows(&h, vec![vec![e("1"), e("i")], vec![e("j"), e("2+k")]]).unwrap();

    for i in 0..2 {
        for j in 0..2 {
            match quasideterminant(&m, i, j) {
                Ok(q) => println!("|M|_{i}{j} = {}", format_element(&q)),
                Err(err) => println!("|M|_{i}{j}: {err}"),
            }
        }
    }
    let inv = quasi_inverse(&m).unwrap();
    println!("M^-1 = {inv:?}");
    println!("M M^-1 = {:?}", m.matmul(&inv));

    let singular = AMatrix::from_rows(&h, vec![vec![e("i"), e("j")], vec![e("k"), e("1")]]).unwrap();
    println!("[[i, j], [k, 1]]: {:?}", quasi_inverse(&singular).err());
}
