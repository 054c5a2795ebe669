//! The tridiagonal kernels behind every ADI stage: Thomas for Dirichlet lines and the
//! cyclic variant for periodic ones.

use mcs_adi::timestepper::{tridiagonal_solve, CyclicFactor, ThomasFactor};

fn main() -> mcs_adi::Result<()> {
    let n = 8;
    let (sub, diag, sup) = (vec![-1.0; n], vec![2.5; n], vec![-0.5; n]);
    let rhs: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
    let x = tridiagonal_solve(&sub, &diag, &sup, &rhs)?;
    println!("one-shot solve:   {x:.5?}");

    // Factor once, solve many right-hand sides.
    let factor = ThomasFactor::new(&sub, &diag, &sup)?;
    let mut y = rhs.clone();
    factor.solve_in_place(&mut y);
    println!("factored solve:   {y:.5?}");

    let cyclic = CyclicFactor::new(-1.0, 2.5, -0.5, n)?;
    let mut z = rhs;
    cyclic.solve_in_place(&mut z);
    println!("periodic solve:   {z:.5?}");
    Ok(())
}
