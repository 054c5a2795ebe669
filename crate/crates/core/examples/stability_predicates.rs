//! Admissible theta, and the scalar amplification moduli behind unconditional stability.

use mcs_adi::fourier::{mcs_scalar_modulus, region4_modulus, theta_admissible};

fn main() -> mcs_adi::Result<()> {
    let rho: f64 = -0.7;
    for theta in [0.2, 0.25, 0.3, 1.0 / 3.0, 0.5, 1.0] {
        println!("theta {theta:.4}: admissible {}", theta_admissible(theta, rho));
    }
    // The worst case sits on the mixed-term bound |z0| = 2 |rho| sqrt(z1 z2).
    for theta in [1.0 / 3.0, 0.5, 1.0] {
        let mut worst: f64 = 0.0;
        for i in -40..=40 {
            for j in -40..=40 {
                let z1 = -(10f64).powf(i as f64 / 10.0);
                let z2 = -(10f64).powf(j as f64 / 10.0);
                for s in [-1.0, 1.0] {
                    let z0 = s * 2.0 * rho.abs() * (z1 * z2).sqrt();
                    worst = worst.max(mcs_scalar_modulus(z0, z1, z2, theta, rho)?);
                }
            }
        }
        println!("theta {theta:.4}: largest |R| on the sample {worst:.6}");
    }
    for z in [0.0, 1.0, 10.0, 1e3] {
        println!("one direction stiff, z = {z:6}: theta 1/2 {:.6}  theta 1/3 {:.6}", region4_modulus(z, 0.5)?, region4_modulus(z, 1.0 / 3.0)?);
    }
    Ok(())
}
