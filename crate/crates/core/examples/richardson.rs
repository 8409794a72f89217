//! The enlarged system: every equation multiplied on the right by each
//! basis unit, eliminated over the algebra, then checked by substitution.

use ncalg::solvers::{build_richardson, solve_richardson};
use ncalg::{collect_unknowns, format_element, normalize_linear, parse_equation, quaternion_algebra, Rational};

fn main() {
    let h = quaternion_algebra::<Rational>();
    for text in ["(i+j)*x*k + k*x*(j+k) = 1+k", "(i+j)*x*k + k*x*(j+1) = j-k"] {
        let eq = parse_equation(text, h.basis_names()).unwrap();
        let names = collect_unknowns(std::slice::from_ref(&eq)).unwrap();
        let system = normalize_linear(&[eq], &names, &h).unwrap();

        let rs = build_richardson(&system);
        println!("{text}");
        for r in 0..rs.amat().rows() {
            let row: Vec<String> = rs.amat().row(r).iter().map(format_element).collect();
            println!("  [{}] | {}", row.join(", "), format_element(&rs.brhs()[r]));
        }

        let sol = solve_richardson(&system).unwrap();
        println!("  {}: x = {}", sol.kind, format_element(&sol.x[0]));
        if let Some(enlarged) = &sol.enlarged {
            for (p, value) in enlarged.particular.iter().enumerate() {
                println!("  x*e{p} = {}", format_element(value));
            }
        }
        println!("  residual norm {:.3e}", sol.residual_norm());
    }
}
