//! The predicted error components: low-wavenumber (two independent routes),
//! high-wavenumber at the origin, and the alternating Crank-Nicolson terms.

use mcs_adi::erroranalysis::{c_cs, c_high, c_low_operator, c_low_quadrature, total_error_estimate};
use mcs_adi::model::ModelParams;
use mcs_adi::quadrature::QuadratureSpec;
use mcs_adi::timestepper::SchemeParams;

fn main() -> mcs_adi::Result<()> {
    let mp = ModelParams::reference();
    let spec = QuadratureSpec::default();
    let h = 1.0 / 32.0;
    let sp = SchemeParams::new(1.0 / 3.0, 0.4, 1.0, 2, h)?;
    for (x, y) in [(-2.0, -3.0), (-1.0, -2.0), (0.0, 0.0)] {
        let q = c_low_quadrature(x, y, &mp, &sp, &spec)?;
        let o = c_low_operator(x, y, &mp, &sp)?;
        println!("C_low({x:4}, {y:4}): quadrature {:+.10e}  operator {o:+.10e}", q.value.re);
    }
    for theta in [1.0 / 3.0, 0.5, 1.0] {
        for n0 in [0, 2] {
            let sp = SchemeParams::new(theta, 0.4, 1.0, n0, h)?;
            println!("theta {theta:.3} n0 {n0}: C_high(0, 0) = {:+.4e}", c_high(0, 0, &mp, &sp, &spec)?);
        }
    }
    let cs = SchemeParams::new(0.5, 0.4, 1.0, 0, h)?;
    println!("theta 1/2: C_cs(0, -a2) = {:+.4e}", c_cs(0, -mp.a2, &mp, &cs, &spec)?);
    let e = total_error_estimate(0, (-mp.a2 / h) as i64, &mp, &cs, &spec)?;
    println!("total at (0, -a2), 1/h = 32: {e:?}");
    Ok(())
}
