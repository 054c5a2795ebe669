//! Von Neumann analysis of the scheme on the unbounded grid.
//!
//! With `theta1 = kappa h1`, `theta2 = eta h2`, the scaled operators `Z0, Z1, Z2` act on
//! the mode `exp(i (j theta1 + k theta2))` as multiplication by the symbols `z0, z1, z2`.
//! One MCS step multiplies it by `R`, one start-up step by `(1 - z/2)^-2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::model::ModelParams;
use crate::timestepper::SchemeParams;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Scaled wavenumbers `(theta1, theta2)` in `[-pi, pi]^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierPoint {
    pub theta1: f64,
    pub theta2: f64,
}

impl FourierPoint {
    pub fn new(theta1: f64, theta2: f64) -> Result<Self> {
        let lim = PI * (1.0 + 1e-12);
        if !(theta1.abs() <= lim && theta2.abs() <= lim) {
            return invalid(format!("Fourier point ({theta1}, {theta2}) outside [-pi, pi]^2"));
        }
        Ok(Self { theta1, theta2 })
    }

    /// The point `(kappa h, c eta h)` for physical wavenumbers.
    pub fn from_wavenumbers(kappa: f64, eta: f64, h: f64, c: f64) -> Result<Self> {
        Self::new(kappa * h, c * eta * h)
    }
}

/// Symbols of `Z0, Z1, Z2` and the derived `z = z0 + z1 + z2`, `p = (1 - theta z1)(1 - theta z2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierSymbols {
    pub z0: Complex64,
    pub z1: Complex64,
    pub z2: Complex64,
    pub z: Complex64,
    pub p: Complex64,
}

pub fn symbols(fp: FourierPoint, mp: &ModelParams, sp: &SchemeParams) -> FourierSymbols {
    let (lambda, h, c) = (sp.lambda, sp.h, sp.c);
    let (t1, t2) = (fp.theta1, fp.theta2);
    let s1 = (0.5 * t1).sin();
    let s2 = (0.5 * t2).sin();
    let z0 = Complex64::new(-2.0 * mp.rho * lambda / (c * h) * t1.sin() * t2.sin(), 0.0);
    let z1 = Complex64::new(-4.0 * lambda / h * s1 * s1, mp.a1 * lambda * t1.sin());
    let z2 = Complex64::new(-4.0 * lambda / (c * c * h) * s2 * s2, mp.a2 * lambda / c * t2.sin());
    let th = sp.theta;
    FourierSymbols {
        z0,
        z1,
        z2,
        z: z0 + z1 + z2,
        p: (1.0 - th * z1) * (1.0 - th * z2),
    }
}

/// `R = 1 + z/p + (theta z0 + (1/2 - theta) z) z / p^2`
pub fn amplification_r(sym: &FourierSymbols, theta: f64) -> Complex64 {
    1.0 + amplification_increment(sym, theta)
}

/// `R - 1`, kept separate so that `log R` can be formed without cancellation.
fn amplification_increment(sym: &FourierSymbols, theta: f64) -> Complex64 {
    let FourierSymbols { z0, z, p, .. } = *sym;
    z / p + (theta * z0 + (0.5 - theta) * z) * z / (p * p)
}

/// Amplification of one implicit Euler half step, `1 / (1 - z/2)`.
pub fn euler_factor(sym: &FourierSymbols) -> Complex64 {
    1.0 / (1.0 - 0.5 * sym.z)
}

/// `log(1 + w)` accurate for small `|w|`.
fn log1p(w: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p();
    Complex64::new(re, w.im.atan2(1.0 + w.re))
}

/// `log U_N = (N - n0) log R + 2 n0 log(1 / (1 - z/2))`, or `None` when `R = 0`.
///
/// The exponents are integers, so the principal branch reproduces `U_N` exactly after
/// exponentiation whatever the phase of `R`.
pub fn log_numerical_fourier_un(fp: FourierPoint, mp: &ModelParams, sp: &SchemeParams) -> Option<Complex64> {
    let sym = symbols(fp, mp, sp);
    let w = amplification_increment(&sym, sp.theta);
    let n0 = sp.n0.min(sp.n_steps);
    let mcs = (sp.n_steps - n0) as f64;
    let mut acc = -2.0 * n0 as f64 * log1p(-0.5 * sym.z);
    if mcs > 0.0 {
        if (1.0 + w).norm() == 0.0 {
            return None;
        }
        acc += mcs * log1p(w);
    }
    Some(acc)
}

/// `U_N = R^(N - n0) (1 - z/2)^(-2 n0)`, the transform of the numerical solution at the horizon.
pub fn numerical_fourier_un(fp: FourierPoint, mp: &ModelParams, sp: &SchemeParams) -> Complex64 {
    match log_numerical_fourier_un(fp, mp, sp) {
        Some(l) => l.exp(),
        None => Complex64::new(0.0, 0.0),
    }
}

/// `U_N` by repeated multiplication; a reference for [`numerical_fourier_un`].
pub fn numerical_fourier_un_direct(fp: FourierPoint, mp: &ModelParams, sp: &SchemeParams) -> Complex64 {
    let sym = symbols(fp, mp, sp);
    let r = amplification_r(&sym, sp.theta);
    let e = euler_factor(&sym);
    let n0 = sp.n0.min(sp.n_steps);
    let mut u = Complex64::new(1.0, 0.0);
    for _ in 0..2 * n0 {
        u *= e;
    }
    for _ in n0..sp.n_steps {
        u *= r;
    }
    u
}

/// `-kappa^2 - 2 rho kappa eta - eta^2 + i a1 kappa + i a2 eta` for complex wavenumbers.
pub fn s0_complex(k: Complex64, e: Complex64, mp: &ModelParams) -> Complex64 {
    -k * k - 2.0 * mp.rho * k * e - e * e + I * mp.a1 * k + I * mp.a2 * e
}

/// Leading exponent of the transform, equal to `log u_hat(kappa, eta, 1)`.
pub fn expansion_s0(kappa: f64, eta: f64, mp: &ModelParams) -> Complex64 {
    s0_complex(kappa.into(), eta.into(), mp)
}

/// The `h^2` coefficient of `(N - n0) log R + n0 log R` for complex wavenumbers.
pub fn s2_complex(k: Complex64, e: Complex64, mp: &ModelParams, sp: &SchemeParams) -> Complex64 {
    let (rho, a1, a2, c) = (mp.rho, mp.a1, mp.a2, sp.c);
    let (lambda, theta) = (sp.lambda, sp.theta);
    let c2 = c * c;
    let l2 = lambda * lambda;
    let s0 = s0_complex(k, e, mp);
    let k2 = k * k;
    let e2 = e * e;
    let central = k2 * k2 / 12.0 + rho / 3.0 * (k2 + c2 * e2) * k * e + c2 * e2 * e2 / 12.0
        - I * a1 * k2 * k / 6.0
        - I * a2 * c2 * e2 * e / 6.0;
    let split = -l2 * theta * theta * (-k2 + I * a1 * k) * (-e2 + I * a2 * e) * s0;
    let cube = l2 / 12.0 * s0 * s0 * s0;
    let mixed = -rho * k * e + (0.5 - theta) * (-k2 - e2 + I * a1 * k + I * a2 * e);
    central + split + cube - l2 * s0 * mixed * mixed
}

pub fn expansion_s2(kappa: f64, eta: f64, mp: &ModelParams, sp: &SchemeParams) -> Complex64 {
    s2_complex(kappa.into(), eta.into(), mp, sp)
}

/// The `h^2` coefficient contributed by the implicit Euler start-up, `n0 lambda^2 s0^2 / 4`.
pub fn n02_complex(k: Complex64, e: Complex64, mp: &ModelParams, sp: &SchemeParams) -> Complex64 {
    let s0 = s0_complex(k, e, mp);
    0.25 * sp.n0 as f64 * sp.lambda * sp.lambda * s0 * s0
}

pub fn expansion_n02(kappa: f64, eta: f64, mp: &ModelParams, sp: &SchemeParams) -> Complex64 {
    n02_complex(kappa.into(), eta.into(), mp, sp)
}

/// `c^2 sin^2(t1/2) + 2 rho c cos(t1/2) sin(t1/2) cos(t2/2) sin(t2/2) + sin^2(t2/2)`
pub fn iota(theta1: f64, theta2: f64, rho: f64, c: f64) -> f64 {
    let (s1, c1) = (0.5 * theta1).sin_cos();
    let (s2, c2) = (0.5 * theta2).sin_cos();
    c * c * s1 * s1 + 2.0 * rho * c * c1 * s1 * c2 * s2 + s2 * s2
}

/// Region of the Fourier domain used by the asymptotic analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionLabel {
    /// Both wavenumbers small: the low-wavenumber error lives here.
    R1,
    /// Transition band where both transforms are negligible.
    R2,
    /// Both wavenumbers large: the high-wavenumber error lives here.
    R3,
    /// `|kappa|` large, `|c eta|` not.
    R4,
    /// `|c eta|` large, `|kappa|` not.
    R5,
}

/// Thresholds `h^(-1/3)` and `h^(-1/2)`; points on a threshold go to the lower region.
pub fn classify_region(kappa: f64, eta: f64, h: f64, c: f64) -> Result<RegionLabel> {
    let a = kappa.abs();
    let b = (c * eta).abs();
    let lim = PI / h * (1.0 + 1e-12);
    if !(h > 0.0) || !(a <= lim && b <= lim) {
        return invalid(format!("wavenumber ({kappa}, {eta}) outside the grid's Fourier domain"));
    }
    // Slack so that thresholds hit exactly (e.g. h = 1/64) are not lost to rounding.
    let low = h.powf(-1.0 / 3.0) * (1.0 + 1e-12);
    let high = h.powf(-0.5) * (1.0 + 1e-12);
    Ok(if a <= low && b <= low {
        RegionLabel::R1
    } else if a > high && b > high {
        RegionLabel::R3
    } else if a > high {
        RegionLabel::R4
    } else if b > high {
        RegionLabel::R5
    } else {
        RegionLabel::R2
    })
}

/// `theta >= 1/4` and `theta > (1 + |rho|)/6`.
pub fn theta_admissible(theta: f64, rho: f64) -> bool {
    theta >= 0.25 && theta > (1.0 + rho.abs()) / 6.0
}

/// `|p^2 + p z + theta z0 z + (1/2 - theta) z^2| / p^2` for real scalars with
/// `z1, z2 <= 0`, `|z0| <= 2 |rho| sqrt(z1 z2)` and at least one of `z1, z2` negative.
pub fn mcs_scalar_modulus(z0t: f64, z1t: f64, z2t: f64, theta: f64, rho: f64) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return invalid(format!("|rho| must be < 1, got {rho}"));
    }
    if !(z1t <= 0.0 && z2t <= 0.0) || !(z1t < 0.0 || z2t < 0.0) {
        return invalid(format!("need z1, z2 <= 0 with one negative, got ({z1t}, {z2t})"));
    }
    let bound = 2.0 * rho.abs() * (z1t * z2t).sqrt();
    if z0t.abs() > bound * (1.0 + 1e-12) {
        return invalid(format!("|z0| = {} exceeds 2|rho|sqrt(z1 z2) = {bound}", z0t.abs()));
    }
    let z = z0t + z1t + z2t;
    let p = (1.0 - theta * z1t) * (1.0 - theta * z2t);
    Ok((p * p + p * z + theta * z0t * z + (0.5 - theta) * z * z).abs() / (p * p))
}

/// Whether the scalar amplification of [`mcs_scalar_modulus`] is below one.
pub fn mcs_scalar_stable(z0t: f64, z1t: f64, z2t: f64, theta: f64, rho: f64) -> Result<bool> {
    Ok(mcs_scalar_modulus(z0t, z1t, z2t, theta, rho)? < 1.0)
}

/// Limit of `|R|` where one wavenumber is large and the other is not:
/// `|(1 + z)^2 theta^2 - (2 + z) theta + 1/2| / ((1 + z)^2 theta^2)` for `z >= 0`.
pub fn region4_modulus(z22t: f64, theta: f64) -> Result<f64> {
    if !(z22t >= 0.0) {
        return invalid(format!("argument must be nonnegative, got {z22t}"));
    }
    let q = (1.0 + z22t) * (1.0 + z22t) * theta * theta;
    Ok((q - (2.0 + z22t) * theta + 0.5).abs() / q)
}
