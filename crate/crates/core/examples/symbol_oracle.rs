//! On a periodic grid each lattice mode is an eigenvector of one MCS step, with
//! eigenvalue given by the amplification factor `R`.

use mcs_adi::fourier::{amplification_r, symbols, FourierPoint};
use mcs_adi::model::ModelParams;
use mcs_adi::timestepper::periodic::PeriodicOperators;
use mcs_adi::timestepper::{SchemeParams, Stepper};

fn main() -> mcs_adi::Result<()> {
    let mp = ModelParams::reference();
    let (m, h) = (32, 1.0 / 16.0);
    let theta = 1.0 / 3.0;
    let sp = SchemeParams::with_steps(theta, 1, 0, 0.5 * h, h, 1.0)?;
    let ops = PeriodicOperators::new(m, h, h, &mp)?;
    let mut stepper = Stepper::new(&ops, sp)?;
    println!("  l1  l2        |R|      max deviation");
    for (l1, l2) in [(0, 0), (1, 2), (5, 27), (16, 16), (30, 3)] {
        let fp = FourierPoint::new(ops.angle(l1), ops.angle(l2))?;
        let r = amplification_r(&symbols(fp, &mp, &sp), theta);
        let (re, im) = ops.mode(l1, l2);
        let (mut a, mut b) = (re.clone(), im.clone());
        stepper.mcs_step(&mut a)?;
        stepper.mcs_step(&mut b)?;
        let dev = (0..m * m)
            .map(|i| ((a[i] - (r.re * re[i] - r.im * im[i])).abs()).max((b[i] - (r.re * im[i] + r.im * re[i])).abs()))
            .fold(0.0f64, f64::max);
        println!("{l1:4}{l2:4}  {:.6e}  {dev:.2e}", r.norm());
    }
    Ok(())
}
