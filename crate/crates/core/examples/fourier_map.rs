//! `|U_N|` at the corner of the Fourier square: high wavenumbers survive plain MCS
//! stepping but are damped by the start-up.

use std::f64::consts::PI;

use mcs_adi::fourier::{numerical_fourier_un, FourierPoint};
use mcs_adi::model::ModelParams;
use mcs_adi::timestepper::SchemeParams;

fn main() -> mcs_adi::Result<()> {
    let mp = ModelParams::reference();
    // h = 1/6, dt = 1/8
    let corner = FourierPoint::new(PI, PI)?;
    let near = FourierPoint::new(0.9 * PI, -0.9 * PI)?;
    println!("theta   n0   |U_N(pi, pi)|   |U_N(0.9pi, -0.9pi)|");
    for theta in [1.0 / 3.0, 0.5, 1.0] {
        for n0 in [0, 2] {
            let sp = SchemeParams::with_steps(theta, 8, n0, 1.0, 1.0 / 6.0, 1.0)?;
            println!(
                "{theta:5.3}  {n0:3}   {:.6e}    {:.6e}",
                numerical_fourier_un(corner, &mp, &sp).norm(),
                numerical_fourier_un(near, &mp, &sp).norm()
            );
        }
    }
    Ok(())
}
