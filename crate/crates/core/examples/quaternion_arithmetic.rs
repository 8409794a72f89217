//! Exact quaternion arithmetic from structural constants.

use ncalg::{format_element, parse_element, quaternion_algebra, Rational};

fn main() {
    let h = quaternion_algebra::<Rational>();
    let a = parse_element("1 + 2i - j", &h).unwrap();
    let b = parse_element("1/2 - k", &h).unwrap();

    println!("a         = {}", format_element(&a));
    println!("b         = {}", format_element(&b));
    println!("a b       = {}", format_element(&(&a * &b)));
    println!("b a       = {}", format_element(&(&b * &a)));
    println!("a^-1      = {}", format_element(&a.inverse().unwrap()));
    println!("a a^-1    = {}", format_element(&(&a * a.inverse().unwrap())));
    println!("|a|^2     = {}", a.norm_squared());
    println!("L(a) =\n{:?}", a.left_matrix());
}
