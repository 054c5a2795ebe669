//! Composite Gauss-Legendre quadrature with panel doubling.

use std::num::NonZeroUsize;
use std::ops::{Add, Mul};

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rule and refinement controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    /// Gauss-Legendre points per panel.
    pub order: usize,
    /// Panels per direction on the first pass.
    pub initial_panels: usize,
    /// Refinement stops once two successive estimates differ by less than this, relatively.
    pub rel_tol: f64,
    pub max_doublings: usize,
    /// Truncation radius for integrals over the whole plane.
    pub radius: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            order: 16,
            initial_panels: 4,
            rel_tol: 1e-8,
            max_doublings: 8,
            radius: 12.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.order == 0 || self.initial_panels == 0 {
            return Err(Error::InvalidParameter("quadrature order and panel count must be positive".into()));
        }
        if !(self.rel_tol > 0.0) || !(self.radius > 0.0) {
            return Err(Error::InvalidParameter("quadrature tolerance and radius must be positive".into()));
        }
        Ok(())
    }

    fn rule(&self) -> Vec<(f64, f64)> {
        let n = NonZeroUsize::new(self.order.max(1)).expect("order is positive");
        GaussLegendre::new(n).as_node_weight_pairs().to_vec()
    }
}

/// An integral estimate with the change made by its last refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    /// `|I_n - I_(n/2)|` for the final panel count `n`.
    pub delta: f64,
    pub panels: usize,
}

/// Values that can be accumulated by the rules below.
pub trait Integrand: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

fn nodes(rule: &[(f64, f64)], a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let width = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * rule.len());
    for p in 0..panels {
        let lo = a + p as f64 * width;
        for &(x, w) in rule {
            out.push((lo + 0.5 * width * (x + 1.0), 0.5 * width * w));
        }
    }
    out
}

fn converged(new: f64, delta: f64, abs_sum: f64, rel_tol: f64) -> bool {
    // The second test accepts results that cancel down to rounding level.
    delta <= rel_tol * new || delta <= 1e-14 * abs_sum
}

/// `int_a^b f`, doubling the panel count until successive estimates agree.
pub fn integrate_1d<T: Integrand>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<T>> {
    let rule = spec.rule();
    let mut panels = spec.initial_panels;
    let mut eval = |panels: usize| {
        let mut sum = T::zero();
        let mut abs_sum = 0.0;
        for (x, w) in nodes(&rule, a, b, panels) {
            let v = f(x);
            sum = sum + v * w;
            abs_sum += v.magnitude() * w.abs();
        }
        (sum, abs_sum)
    };
    let (mut prev, _) = eval(panels);
    let mut delta = f64::INFINITY;
    for _ in 0..spec.max_doublings {
        panels *= 2;
        let (cur, abs_sum) = eval(panels);
        delta = (cur + prev * -1.0).magnitude();
        if converged(cur.magnitude(), delta, abs_sum, spec.rel_tol) {
            return Ok(Estimate {
                value: cur,
                delta,
                panels,
            });
        }
        prev = cur;
    }
    Err(Error::Quadrature { delta })
}

/// `int_a^b int_c^d f(x, y) dy dx` on a tensor grid of panels, both directions
/// refined together. `initial_panels` overrides `QuadratureSpec::initial_panels` per direction.
pub fn integrate_2d<T: Integrand>(
    mut f: impl FnMut(f64, f64) -> T,
    (a, b): (f64, f64),
    (c, d): (f64, f64),
    spec: &QuadratureSpec,
    initial_panels: Option<(usize, usize)>,
) -> Result<Estimate<T>> {
    let rule = spec.rule();
    let (mut px, mut py) = initial_panels.unwrap_or((spec.initial_panels, spec.initial_panels));
    let mut eval = |px: usize, py: usize| {
        let xs = nodes(&rule, a, b, px);
        let ys = nodes(&rule, c, d, py);
        let mut sum = T::zero();
        let mut abs_sum = 0.0;
        for &(x, wx) in &xs {
            let mut row = T::zero();
            let mut row_abs = 0.0;
            for &(y, wy) in &ys {
                let v = f(x, y);
                row = row + v * wy;
                row_abs += v.magnitude() * wy.abs();
            }
            sum = sum + row * wx;
            abs_sum += row_abs * wx.abs();
        }
        (sum, abs_sum)
    };
    let (mut prev, _) = eval(px, py);
    let mut delta = f64::INFINITY;
    for _ in 0..spec.max_doublings {
        px *= 2;
        py *= 2;
        let (cur, abs_sum) = eval(px, py);
        delta = (cur + prev * -1.0).magnitude();
        if converged(cur.magnitude(), delta, abs_sum, spec.rel_tol) {
            return Ok(Estimate {
                value: cur,
                delta,
                panels: px.max(py),
            });
        }
        prev = cur;
    }
    Err(Error::Quadrature { delta })
}
