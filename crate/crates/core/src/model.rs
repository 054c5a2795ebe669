//! Continuous model problem
//!
//! `u_t = u_xx + 2 rho u_xy + u_yy + a1 u_x + a2 u_y` on the whole plane with
//! `u(x, y, 0) = delta(x) delta(y)`. Its solution is a bivariate normal density
//! with mean `(-a1 t, -a2 t)` and covariance `2t [[1, rho], [rho, 1]]`.
//!
//! Fourier transforms use the convention `u_hat(kappa, eta) = int u exp(-i kappa x - i eta y)`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Coefficients of the model convection-diffusion equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub rho: f64,
    pub a1: f64,
    pub a2: f64,
}

impl ModelParams {
    pub fn new(rho: f64, a1: f64, a2: f64) -> Result<Self> {
        let p = Self { rho, a1, a2 };
        p.validate()?;
        Ok(p)
    }

    /// The parameter set used throughout the numerical experiments.
    pub fn reference() -> Self {
        Self {
            rho: -0.7,
            a1: 2.0,
            a2: 3.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho.abs() < 1.0) {
            return invalid(format!("|rho| must be < 1, got {}", self.rho));
        }
        if !self.a1.is_finite() || !self.a2.is_finite() {
            return invalid("drift coefficients must be finite");
        }
        Ok(())
    }

    /// `1 - rho^2`
    pub fn one_minus_rho2(&self) -> f64 {
        1.0 - self.rho * self.rho
    }
}

/// Market parameters of the two-asset Black-Scholes problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BSParams {
    pub r: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub rho: f64,
    #[serde(rename = "k1")]
    pub strike1: f64,
    #[serde(rename = "k2")]
    pub strike2: f64,
    #[serde(rename = "t")]
    pub maturity: f64,
}

impl Default for BSParams {
    fn default() -> Self {
        Self {
            r: 0.05,
            sigma1: 0.2,
            sigma2: 0.25,
            rho: -0.7,
            strike1: 1.0,
            strike2: 1.0,
            maturity: 2.0,
        }
    }
}

impl BSParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma1 > 0.0 && self.sigma2 > 0.0) {
            return invalid("volatilities must be positive");
        }
        if !(self.rho.abs() < 1.0) {
            return invalid(format!("|rho| must be < 1, got {}", self.rho));
        }
        if !(self.strike1 > 0.0 && self.strike2 > 0.0) {
            return invalid("strikes must be positive");
        }
        if !(self.maturity > 0.0) {
            return invalid("maturity must be positive");
        }
        if !self.r.is_finite() {
            return invalid("rate must be finite");
        }
        Ok(())
    }
}

/// Closed-form solution of the model problem at time `t > 0`.
pub fn exact_solution(x: f64, y: f64, t: f64, p: &ModelParams) -> Result<f64> {
    if !(t > 0.0) {
        return invalid(format!("exact solution needs t > 0, got {t}"));
    }
    let om = p.one_minus_rho2();
    let xs = x + p.a1 * t;
    let ys = y + p.a2 * t;
    let q = xs * xs + ys * ys - 2.0 * p.rho * xs * ys;
    Ok((-q / (4.0 * t * om)).exp() / (4.0 * PI * t * om.sqrt()))
}

/// Fourier transform of the exact solution, `exp(-(k^2 + 2 rho k e + e^2 - i a1 k - i a2 e) t)`.
pub fn exact_fourier(kappa: f64, eta: f64, t: f64, p: &ModelParams) -> Complex64 {
    let re = -(kappa * kappa + 2.0 * p.rho * kappa * eta + eta * eta) * t;
    let im = (p.a1 * kappa + p.a2 * eta) * t;
    Complex64::new(re, im).exp()
}

/// Standard bivariate normal density with correlation `rho`.
pub fn phi_rho(x: f64, y: f64, p: &ModelParams) -> f64 {
    let om = p.one_minus_rho2();
    let q = x * x - 2.0 * p.rho * x * y + y * y;
    (-q / (2.0 * om)).exp() / (2.0 * PI * om.sqrt())
}

/// Highest total derivative order supported by [`phi_rho_partial`].
pub const MAX_DERIVATIVE_ORDER: usize = 6;

const DIM: usize = MAX_DERIVATIVE_ORDER + 1;

/// Bivariate polynomial `sum c[a][b] x^a y^b` of degree at most six.
#[derive(Clone)]
pub(crate) struct Poly2(pub(crate) [[f64; DIM]; DIM]);

impl Poly2 {
    pub(crate) fn zero() -> Self {
        Self([[0.0; DIM]; DIM])
    }

    fn one() -> Self {
        let mut c = [[0.0; DIM]; DIM];
        c[0][0] = 1.0;
        Self(c)
    }

    /// `self += s * other`
    pub(crate) fn axpy(&mut self, s: f64, other: &Poly2) {
        for (row, orow) in self.0.iter_mut().zip(&other.0) {
            for (c, o) in row.iter_mut().zip(orow) {
                *c += s * o;
            }
        }
    }

    pub(crate) fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for a in (0..DIM).rev() {
            let mut row = 0.0;
            for b in (0..DIM).rev() {
                row = row * y + self.0[a][b];
            }
            acc = acc * x + row;
        }
        acc
    }

    /// Maps `P` to `dP/dx - P (x - rho y) / (1 - rho^2)`, i.e. the polynomial factor of
    /// `d/dx (P phi_rho)`. With `swap` set the roles of x and y are exchanged.
    fn differentiate(&self, rho: f64, swap: bool) -> Self {
        let s = 1.0 / (1.0 - rho * rho);
        let mut out = [[0.0; DIM]; DIM];
        let get = |a: usize, b: usize| if swap { self.0[b][a] } else { self.0[a][b] };
        for a in 0..DIM {
            for b in 0..DIM {
                let c = get(a, b);
                if c == 0.0 {
                    continue;
                }
                let mut put = |i: usize, j: usize, v: f64| {
                    if swap {
                        out[j][i] += v;
                    } else {
                        out[i][j] += v;
                    }
                };
                if a > 0 {
                    put(a - 1, b, c * a as f64);
                }
                if a + 1 < DIM {
                    put(a + 1, b, -c * s);
                }
                if b + 1 < DIM {
                    put(a, b + 1, c * rho * s);
                }
            }
        }
        Self(out)
    }
}

/// Mixed partial derivative `d^(n1+n2) phi_rho / dx^n1 dy^n2` evaluated at `(x, y)`.
///
/// Every derivative of the density is a polynomial times the density itself; the
/// polynomial is built by repeated application of
/// `d/dx (P phi) = (dP/dx - P (x - rho y)/(1 - rho^2)) phi`.
pub fn phi_rho_partial(n1: usize, n2: usize, x: f64, y: f64, p: &ModelParams) -> Result<f64> {
    if n1 + n2 > MAX_DERIVATIVE_ORDER {
        return invalid(format!(
            "derivative order {} exceeds supported maximum {MAX_DERIVATIVE_ORDER}",
            n1 + n2
        ));
    }
    Ok(density_derivative_poly(n1, n2, p.rho).eval(x, y) * phi_rho(x, y, p))
}

/// The polynomial `P` with `d^(n1+n2) phi_rho / dx^n1 dy^n2 = P phi_rho`; `n1 + n2 <= 6`.
pub(crate) fn density_derivative_poly(n1: usize, n2: usize, rho: f64) -> Poly2 {
    debug_assert!(n1 + n2 <= MAX_DERIVATIVE_ORDER);
    let mut poly = Poly2::one();
    for _ in 0..n1 {
        poly = poly.differentiate(rho, false);
    }
    for _ in 0..n2 {
        poly = poly.differentiate(rho, true);
    }
    poly
}

/// Log-price transform `x = sqrt(2) ln(s1) / sigma1`, `y = sqrt(2) ln(s2) / sigma2`.
pub fn bs_to_model(s1: f64, s2: f64, bs: &BSParams) -> Result<(f64, f64)> {
    if !(s1 > 0.0 && s2 > 0.0) {
        return invalid(format!("asset prices must be positive, got ({s1}, {s2})"));
    }
    Ok((SQRT_2 * s1.ln() / bs.sigma1, SQRT_2 * s2.ln() / bs.sigma2))
}

/// Inverse of [`bs_to_model`].
pub fn model_to_bs(x: f64, y: f64, bs: &BSParams) -> (f64, f64) {
    ((x * bs.sigma1 / SQRT_2).exp(), (y * bs.sigma2 / SQRT_2).exp())
}
