//! Newton's method for x² − ix − xj + k = 0 starting at 1 + j.

use ncalg::{newton_solve, normalize_poly, parse_element, parse_equation, quaternion_algebra, NewtonConfig};

fn main() {
    let h = quaternion_algebra::<f64>();
    let eq = parse_equation("x^2 - i*x - x*j + k = 0", h.basis_names()).unwrap();
    let (p, target) = normalize_poly(&eq, "x", &h, 8).unwrap();
    let x0 = parse_element("1+j", &h).unwrap();

    let trace = newton_solve(&p, &target, &x0, &NewtonConfig::default()).unwrap();
    for it in &trace.iterates {
        let c = it.x.coords();
        println!("x{} = [{:+.6}, {:+.6}, {:+.6}, {:+.1e}]  |f(x) - a| = {:.3e}", it.k, c[0], c[1], c[2], c[3], it.residual_norm);
    }
    println!("{} after {} steps", trace.status, trace.steps());
}
