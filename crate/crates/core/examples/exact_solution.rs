//! The model problem's closed-form solution, its transform and density derivatives.

use mcs_adi::model::{exact_fourier, exact_solution, phi_rho, phi_rho_partial, ModelParams};

fn main() -> mcs_adi::Result<()> {
    let p = ModelParams::reference();
    // The bivariate normal peaks at the mean (-a1 t, -a2 t).
    for t in [0.25, 0.5, 1.0] {
        let (x, y) = (-p.a1 * t, -p.a2 * t);
        println!("t = {t:4}: u({x:5.2}, {y:5.2}) = {:.6}", exact_solution(x, y, t, &p)?);
    }
    let u = exact_fourier(0.7, -0.4, 1.0, &p);
    println!("u_hat(0.7, -0.4, 1) = {:.6} {:+.6}i", u.re, u.im);

    println!("phi_rho(0, 0) = {:.6}", phi_rho(0.0, 0.0, &p));
    for (n1, n2) in [(1, 0), (0, 1), (1, 1), (2, 2), (3, 1)] {
        println!("d^{n1},{n2} phi_rho(0.3, -0.2) = {:+.6e}", phi_rho_partial(n1, n2, 0.3, -0.2, &p)?);
    }
    Ok(())
}
