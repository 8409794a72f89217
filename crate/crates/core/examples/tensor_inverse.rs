//! Tensors in A⊗A acting as x ↦ Σ a x b, their composition and inverse.

use ncalg::{format_element, parse_element, parse_tensor, quaternion_algebra, Rational};

fn main() {
    let h = quaternion_algebra::<Rational>();
    let f = parse_tensor("(i+j)(x)k + k(x)(j+k)", &h).unwrap();
    let g = f.invert().unwrap();
    println!("f     = {}", f.pairs_string());
    println!("g     = {g}");
    println!("f∘g   = {}", f.compose(&g).unwrap());

    let b = parse_element("1+k", &h).unwrap();
    println!("g(1+k) = {}", format_element(&g.apply(&b).unwrap()));

    let singular = parse_tensor("i(x)k + j(x)k + k(x)1 + k(x)j", &h).unwrap();
    match singular.invert() {
        Ok(_) => println!("unexpectedly invertible"),
        Err(e) => println!("{}: {e}", singular.pairs_string()),
    }
}
