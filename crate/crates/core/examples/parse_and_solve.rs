//! Parsing a system in two unknowns and checking the answer by substitution.

use ncalg::{collect_unknowns, format_element, normalize_linear, parse_equation, quaternion_algebra, solve_field, Rational};

fn main() {
    let h = quaternion_algebra::<Rational>();
    let texts = ["x1 + i*x2*j = 1", "(1+k)*x1 - x2 = i - 2j"];
    let eqs: Vec<_> = texts.iter().map(|t| parse_equation(t, h.basis_names()).unwrap()).collect();
    let names = collect_unknowns(&eqs).unwrap();
    let system = normalize_linear(&eqs, &names, &h).unwrap();

    let sol = solve_field(&system);
    println!("{}", sol.kind);
    for (name, x) in names.iter().zip(&sol.x) {
        println!("{name} = {}", format_element(x));
    }
    println!("satisfied: {}", system.is_satisfied_by(&sol.x).unwrap());
}
