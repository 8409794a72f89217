//! An algebra given by its own multiplication table: the split-complex
//! numbers, where e² = 1 and 1 ± e are zero divisors.

use ncalg::solvers::{solve_field, solve_richardson};
use ncalg::{collect_unknowns, format_element, normalize_linear, parse_equation, Algebra, Rational, Scalar};

fn main() {
    let c = |v: i64| Rational::from_i64(v);
    let constants = vec![vec![vec![c(1), c(0)], vec![c(0), c(1)]], vec![vec![c(0), c(1)], vec![c(1), c(0)]]];
    let alg = Algebra::new("split-complex", constants, vec!["1".into(), "e".into()]).unwrap();

    for text in ["(2+e)*x = 3", "(1+e)*x = 1+e", "(1+e)*x = 1"] {
        let eq = parse_equation(text, alg.basis_names()).unwrap();
        let names = collect_unknowns(std::slice::from_ref(&eq)).unwrap();
        let system = normalize_linear(&[eq], &names, &alg).unwrap();
        let sol = solve_field(&system);
        print!("{text}: {}", sol.kind);
        if let Some(x) = sol.x.first() {
            print!(" x = {}", format_element(x));
        }
        for dir in &sol.nullspace {
            print!(" + C*({})", format_element(&dir[0]));
        }
        match solve_richardson(&system) {
            Ok(r) => println!("; enlarged: {}", r.kind),
            Err(e) => println!("; enlarged: {e}"),
        }
    }
}
