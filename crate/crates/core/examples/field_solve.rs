//! Solving a linear equation by vectorizing it over the base field.

use ncalg::{collect_unknowns, format_element, normalize_linear, parse_equation, quaternion_algebra, solve_field, Rational};

fn main() {
    let h = quaternion_algebra::<Rational>();
    for text in [
        "(i+j)*x*k + k*x*(j+k) = 1+k",
        "(i+j)*x*k + k*x*(j+1) = 1+k",
        "(i+j)*x*k + k*x*(j+1) = j-k",
    ] {
        let eq = parse_equation(text, h.basis_names()).unwrap();
        let names = collect_unknowns(std::slice::from_ref(&eq)).unwrap();
        let system = normalize_linear(&[eq], &names, &h).unwrap();
        println!("{text}");
        println!("  field matrix:\n{:?}", system.field_matrix());
        let sol = solve_field(&system);
        match sol.x.first() {
            Some(x) => println!("  {}: x = {}", sol.kind, format_element(x)),
            None => println!("  {}", sol.kind),
        }
        for (name, dir) in sol.free_names.iter().zip(&sol.nullspace) {
            println!("  + {name} * ({})", format_element(&dir[0]));
        }
    }
}
