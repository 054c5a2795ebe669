//! Physical-space error predictions.
//!
//! The error of `U_N` at the node `(x_j, y_k) = (j h, k c h)` splits into a smooth
//! low-wavenumber part `h^2 C_low(x_j, y_k)`, a high-wavenumber part
//! `h^(2 n0 - 2) C_high(j, k)` that is concentrated at the origin, and for `theta = 1/2`
//! the alternating terms `h^(2 n0 - 1) (-1)^(N - n0) (C_cs(j, y_k) + C_cs(x_j, k))`.

use std::f64::consts::{PI, SQRT_2};
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::discretization::Grid2D;
use crate::error::{invalid, Error, Result};
use crate::fourier::{iota, n02_complex, s2_complex, theta_admissible};
use crate::model::{density_derivative_poly, phi_rho, ModelParams, Poly2, MAX_DERIVATIVE_ORDER};
use crate::quadrature::{integrate_1d, integrate_2d, Estimate, QuadratureSpec};
use crate::timestepper::SchemeParams;

/// Relative agreement demanded of the two `C_low` evaluations.
pub const ROUTE_TOLERANCE: f64 = 1e-6;

/// Values below this magnitude are exempt from the route agreement check.
const ROUTE_FLOOR: f64 = 1e-12;

/// Products `s1^2 s2^2` below this are treated as lying on an axis, where the
/// high-wavenumber integrand vanishes to all orders.
const AXIS_GUARD: f64 = 1e-12;

/// Default half-width, in grid indices, of [`HighWavenumberTable`].
pub const DEFAULT_HIGH_WINDOW: usize = 128;

/// Error prediction at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEstimate {
    pub e_low: f64,
    pub e_high: f64,
    pub e_cs: f64,
    pub total: f64,
}

impl ErrorEstimate {
    pub fn new(e_low: f64, e_high: f64, e_cs: f64) -> Self {
        Self {
            e_low,
            e_high,
            e_cs,
            total: e_low + e_high + e_cs,
        }
    }
}

fn check_admissible(mp: &ModelParams, sp: &SchemeParams) -> Result<()> {
    mp.validate()?;
    if !theta_admissible(sp.theta, mp.rho) {
        return invalid(format!(
            "theta = {} violates theta >= 1/4, theta > (1 + |rho|)/6; the error expansion does not apply",
            sp.theta
        ));
    }
    Ok(())
}

fn is_crank_nicolson_like(theta: f64) -> bool {
    (theta - 0.5).abs() < 1e-14
}

// ---------------------------------------------------------------- low wavenumbers

const DIM: usize = MAX_DERIVATIVE_ORDER + 1;

/// Polynomial in the derivative symbols `(Dx, Dy)`; entry `[a][b]` multiplies `Dx^a Dy^b`.
/// The symbols act on `phi_rho(u, v)` in its own arguments.
#[derive(Clone, Copy)]
struct Op([[f64; DIM]; DIM]);

impl Op {
    fn d(a: usize, b: usize) -> Self {
        let mut c = [[0.0; DIM]; DIM];
        c[a][b] = 1.0;
        Op(c)
    }
}

impl Add for Op {
    type Output = Op;
    fn add(mut self, o: Op) -> Op {
        for a in 0..DIM {
            for b in 0..DIM {
                self.0[a][b] += o.0[a][b];
            }
        }
        self
    }
}

impl Mul<f64> for Op {
    type Output = Op;
    fn mul(mut self, s: f64) -> Op {
        self.0.iter_mut().flatten().for_each(|c| *c *= s);
        self
    }
}

impl Mul for Op {
    type Output = Op;
    fn mul(self, o: Op) -> Op {
        let mut out = [[0.0; DIM]; DIM];
        for a in 0..DIM {
            for b in 0..DIM {
                if self.0[a][b] == 0.0 {
                    continue;
                }
                for c in 0..DIM - a {
                    for d in 0..DIM - b {
                        if a + b + c + d <= MAX_DERIVATIVE_ORDER {
                            out[a + c][b + d] += self.0[a][b] * o.0[c][d];
                        } else {
                            debug_assert!(o.0[c][d] == 0.0, "operator order exceeds six");
                        }
                    }
                }
            }
        }
        Op(out)
    }
}

/// `C_low` as a differential operator applied to `phi_rho((x + a1)/sqrt2, (y + a2)/sqrt2)`,
/// collapsed to a single polynomial factor so that whole grids are cheap.
#[derive(Clone)]
pub struct LowWavenumberOperator {
    mp: ModelParams,
    poly: Poly2,
}

impl LowWavenumberOperator {
    pub fn new(mp: &ModelParams, sp: &SchemeParams) -> Result<Self> {
        check_admissible(mp, sp)?;
        let (rho, a1, a2) = (mp.rho, mp.a1, mp.a2);
        let c2 = sp.c * sp.c;
        let (lambda, theta) = (sp.lambda, sp.theta);
        let l2 = lambda * lambda;
        let d = Op::d;
        let (dx, dy) = (d(1, 0), d(0, 1));
        let drift = dx * (a1 / SQRT_2) + dy * (a2 / SQRT_2);
        let gen = dx * dx * 0.5 + dx * dy * rho + dy * dy * 0.5 + drift;
        let central = d(4, 0) * (1.0 / 48.0)
            + (d(3, 1) + d(1, 3) * c2) * (rho / 12.0)
            + d(0, 4) * (c2 / 48.0)
            + d(3, 0) * (a1 / (12.0 * SQRT_2))
            + d(0, 3) * (a2 * c2 / (12.0 * SQRT_2));
        let split = (dx * dx * 0.5 + dx * (a1 / SQRT_2)) * (dy * dy * 0.5 + dy * (a2 / SQRT_2)) * gen
            * (-l2 * theta * theta);
        let cube = gen * gen * gen * (l2 / 12.0);
        let m = dx * dy * (0.5 * rho) + (dx * dx * 0.5 + dy * dy * 0.5 + drift) * (0.5 - theta);
        let mixed = gen * m * m * (-l2);
        let startup = gen * gen * (sp.n0 as f64 * l2 / 4.0);
        let op = (central + split + cube + mixed + startup) * 0.5;

        // Dx, Dy differentiate phi_rho in its own arguments u = (x + a1)/sqrt2, v = (y + a2)/sqrt2.
        let mut poly = Poly2::zero();
        for a in 0..DIM {
            for b in 0..DIM - a {
                if op.0[a][b] != 0.0 {
                    poly.axpy(op.0[a][b], &density_derivative_poly(a, b, rho));
                }
            }
        }
        Ok(Self { mp: *mp, poly })
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let u = (x + self.mp.a1) / SQRT_2;
        let v = (y + self.mp.a2) / SQRT_2;
        self.poly.eval(u, v) * phi_rho(u, v, &self.mp)
    }
}

/// `C_low(x, y)` by quadrature of `(1/4 pi^2) int u_hat (s2 + N02) exp(i kappa x + i eta y)`.
///
/// The contour is shifted to the saddle point of the Gaussian factor, which leaves a
/// non-oscillatory integrand `exp(-q^T M q) g(q + i alpha)` on real `q`.
pub fn c_low_quadrature(
    x: f64,
    y: f64,
    mp: &ModelParams,
    sp: &SchemeParams,
    spec: &QuadratureSpec,
) -> Result<Estimate<Complex64>> {
    check_admissible(mp, sp)?;
    spec.validate()?;
    let rho = mp.rho;
    let (bx, by) = (x + mp.a1, y + mp.a2);
    let om = mp.one_minus_rho2();
    // alpha = M^-1 b / 2 with M = [[1, rho], [rho, 1]]
    let alpha = ((bx - rho * by) / (2.0 * om), (by - rho * bx) / (2.0 * om));
    let damping = (-(bx * bx - 2.0 * rho * bx * by + by * by) / (4.0 * om)).exp();
    let pref = damping / (4.0 * PI * PI);
    // The radius is measured along the Gaussian's weakest direction.
    let r = spec.radius / (1.0 - rho.abs()).sqrt();
    let est = integrate_2d(
        |p: f64, q: f64| {
            let k = Complex64::new(p, alpha.0);
            let e = Complex64::new(q, alpha.1);
            let g = s2_complex(k, e, mp, sp) + n02_complex(k, e, mp, sp);
            g * (-(p * p + 2.0 * rho * p * q + q * q)).exp()
        },
        (-r, r),
        (-r, r),
        spec,
        None,
    )?;
    Ok(Estimate {
        value: est.value * pref,
        delta: est.delta * pref,
        panels: est.panels,
    })
}

/// `C_low(x, y)` by the differential-operator form.
pub fn c_low_operator(x: f64, y: f64, mp: &ModelParams, sp: &SchemeParams) -> Result<f64> {
    Ok(LowWavenumberOperator::new(mp, sp)?.eval(x, y))
}

/// `C_low(x, y)`, computed both ways; returns the quadrature value once the two agree.
pub fn c_low(x: f64, y: f64, mp: &ModelParams, sp: &SchemeParams, spec: &QuadratureSpec) -> Result<f64> {
    let quadrature = c_low_quadrature(x, y, mp, sp, spec)?.value.re;
    let operator = c_low_operator(x, y, mp, sp)?;
    let scale = quadrature.abs().max(operator.abs());
    if scale > ROUTE_FLOOR && (quadrature - operator).abs() > ROUTE_TOLERANCE * scale {
        return Err(Error::RouteMismatch {
            x,
            y,
            quadrature,
            operator,
        });
    }
    Ok(quadrature)
}

// ---------------------------------------------------------------- high wavenumbers

/// `[2 lambda iota]^(-2 n0) exp(-iota / (4 lambda^2 theta^2 s1^2 s2^2))`
fn high_weight(t1: f64, t2: f64, rho: f64, sp: &SchemeParams) -> f64 {
    let s1 = (0.5 * t1).sin();
    let s2 = (0.5 * t2).sin();
    let ss = s1 * s1 * s2 * s2;
    if ss < AXIS_GUARD {
        return 0.0;
    }
    let io = iota(t1, t2, rho, sp.c);
    let lt = sp.lambda * sp.theta;
    let e = (-io / (4.0 * lt * lt * ss)).exp();
    if e == 0.0 {
        return 0.0;
    }
    e / (2.0 * sp.lambda * io).powi(2 * sp.n0 as i32)
}

fn high_prefactor(sp: &SchemeParams) -> f64 {
    sp.c.powi(4 * sp.n0 as i32 - 1) / (2.0 * PI * PI)
}

/// `C_high(j, k)` by composite Gauss-Legendre over `[0, pi]^2` and `[-pi, 0] x [0, pi]`.
pub fn c_high(j: i64, k: i64, mp: &ModelParams, sp: &SchemeParams, spec: &QuadratureSpec) -> Result<f64> {
    check_admissible(mp, sp)?;
    spec.validate()?;
    let (jf, kf) = (j as f64, k as f64);
    // Enough panels to resolve the oscillation from the first pass.
    let wave = |n: i64| spec.initial_panels.max(n.unsigned_abs() as usize / 4 + 1);
    let panels = Some((wave(j), wave(k)));
    let f = |t1: f64, t2: f64| (jf * t1 + kf * t2).cos() * high_weight(t1, t2, mp.rho, sp);
    let right = integrate_2d(f, (0.0, PI), (0.0, PI), spec, panels)?;
    let left = integrate_2d(f, (-PI, 0.0), (0.0, PI), spec, panels)?;
    Ok(high_prefactor(sp) * (right.value + left.value))
}

/// `C_high(j, k)` for all `|j|, |k| <= window` at once.
///
/// The integrand is smooth and 2 pi periodic, so the trapezoidal rule converges
/// spectrally and the whole table is one separable discrete Fourier transform. The node
/// count doubles until the table stops changing. Outside the window the table reads 0;
/// the integrand's essential zeros on the axes make the coefficients decay faster than
/// any power of the index.
#[derive(Debug, Clone)]
pub struct HighWavenumberTable {
    window: usize,
    values: Vec<f64>,
    pub nodes: usize,
}

impl HighWavenumberTable {
    pub fn new(window: usize, mp: &ModelParams, sp: &SchemeParams, spec: &QuadratureSpec) -> Result<Self> {
        check_admissible(mp, sp)?;
        spec.validate()?;
        let mut n = (2 * window + 2).next_power_of_two().max(64);
        let mut prev = Self::trapezoid(window, n, mp, sp);
        for _ in 0..spec.max_doublings {
            n *= 2;
            let cur = Self::trapezoid(window, n, mp, sp);
            let scale = cur.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let delta = cur.iter().zip(&prev).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            if delta <= spec.rel_tol * scale || scale == 0.0 {
                return Ok(Self {
                    window,
                    values: cur,
                    nodes: n,
                });
            }
            prev = cur;
        }
        Err(Error::Quadrature { delta: f64::NAN })
    }

    fn trapezoid(window: usize, n: usize, mp: &ModelParams, sp: &SchemeParams) -> Vec<f64> {
        let w = window as i64;
        let width = 2 * window + 1;
        let step = 2.0 * PI / n as f64;
        let theta = |a: usize| -PI + step * a as f64;
        let root: Vec<Complex64> = (0..n).map(|m| Complex64::from_polar(1.0, step * m as f64)).collect();
        // exp(i k theta_b) = (-1)^k root[k b mod n]
        let phase = |k: i64, b: usize| {
            let m = (k.rem_euclid(n as i64) as usize * b) % n;
            if k.rem_euclid(2) == 0 {
                root[m]
            } else {
                -root[m]
            }
        };
        let f: Vec<f64> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| high_weight(theta(a), theta(b), mp.rho, sp))
            .collect();
        // g[a][k] = sum_b f[a][b] exp(i k theta_b)
        let mut g = vec![Complex64::new(0.0, 0.0); n * width];
        for a in 0..n {
            let row = &f[a * n..(a + 1) * n];
            if row.iter().all(|&v| v == 0.0) {
                continue;
            }
            for (ki, k) in (-w..=w).enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (b, &v) in row.iter().enumerate() {
                    if v != 0.0 {
                        acc += phase(k, b) * v;
                    }
                }
                g[a * width + ki] = acc;
            }
        }
        // Full-square integral is twice the two-panel half-plane form.
        let scale = 0.5 * high_prefactor(sp) * step * step;
        let mut out = vec![0.0; width * width];
        for (ji, j) in (-w..=w).enumerate() {
            for ki in 0..width {
                let mut acc = 0.0;
                for a in 0..n {
                    acc += (phase(j, a) * g[a * width + ki]).re;
                }
                out[ji * width + ki] = scale * acc;
            }
        }
        out
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn get(&self, j: i64, k: i64) -> f64 {
        let w = self.window as i64;
        if j.abs() > w || k.abs() > w {
            return 0.0;
        }
        let width = 2 * self.window + 1;
        self.values[(j + w) as usize * width + (k + w) as usize]
    }
}

// ---------------------------------------------------------------- theta = 1/2

fn normal_density(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// `int_-pi^pi cos(n t) (2 mu s^2)^(-2 n0) exp(-1 / (mu^2 s^2)) dt` with `s = sin(t/2)`.
fn cs_integral(n: i64, mu: f64, n0: usize, spec: &QuadratureSpec) -> Result<f64> {
    let nf = n as f64;
    let f = |t: f64| {
        let s2 = (0.5 * t).sin().powi(2);
        if s2 < AXIS_GUARD {
            return 0.0;
        }
        let e = (-1.0 / (mu * mu * s2)).exp();
        if e == 0.0 {
            return 0.0;
        }
        (nf * t).cos() * e / (2.0 * mu * s2).powi(2 * n0 as i32)
    };
    let local = QuadratureSpec {
        initial_panels: spec.initial_panels.max(n.unsigned_abs() as usize / 4 + 1),
        ..*spec
    };
    // The integrand is even.
    Ok(2.0 * integrate_1d(f, 0.0, PI, &local)?.value)
}

fn check_cs(mp: &ModelParams, sp: &SchemeParams, spec: &QuadratureSpec) -> Result<()> {
    if !is_crank_nicolson_like(sp.theta) {
        return invalid(format!("the alternating error terms exist only for theta = 1/2, got {}", sp.theta));
    }
    check_admissible(mp, sp)?;
    spec.validate()
}

/// `C_cs(j, y)`, the term generated where `|kappa|` is large and `|c eta|` is not.
pub fn c_cs(j: i64, y: f64, mp: &ModelParams, sp: &SchemeParams, spec: &QuadratureSpec) -> Result<f64> {
    check_cs(mp, sp, spec)?;
    let density = normal_density((y + mp.a2) / SQRT_2) / (2.0 * SQRT_2 * PI);
    Ok(density * cs_integral(j, sp.lambda, sp.n0, spec)?)
}

/// `C_cs(x, k)`, the mirror image of [`c_cs`] for large `|c eta|`.
pub fn c_cs_mirror(x: f64, k: i64, mp: &ModelParams, sp: &SchemeParams, spec: &QuadratureSpec) -> Result<f64> {
    check_cs(mp, sp, spec)?;
    let density = normal_density((x + mp.a1) / SQRT_2) / (2.0 * SQRT_2 * sp.c * PI);
    Ok(density * cs_integral(k, sp.lambda / sp.c, sp.n0, spec)?)
}

// ---------------------------------------------------------------- assembly

/// `(-1)^(N - n0)`
fn parity_sign(sp: &SchemeParams) -> f64 {
    if (sp.n_steps - sp.n0.min(sp.n_steps)) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Total error prediction at index `(j, k)`, i.e. at `(j h, k c h)`.
pub fn total_error_estimate(
    j: i64,
    k: i64,
    mp: &ModelParams,
    sp: &SchemeParams,
    spec: &QuadratureSpec,
) -> Result<ErrorEstimate> {
    let h = sp.h;
    let (x, y) = (j as f64 * h, k as f64 * sp.c * h);
    let e_low = h * h * c_low(x, y, mp, sp, spec)?;
    let e_high = h.powi(2 * sp.n0 as i32 - 2) * c_high(j, k, mp, sp, spec)?;
    let e_cs = if is_crank_nicolson_like(sp.theta) {
        let cs = c_cs(j, y, mp, sp, spec)? + c_cs_mirror(x, k, mp, sp, spec)?;
        h.powi(2 * sp.n0 as i32 - 1) * parity_sign(sp) * cs
    } else {
        0.0
    };
    Ok(ErrorEstimate::new(e_low, e_high, e_cs))
}

/// Predictions for every node of a grid whose nodes lie on the lattice `(j h, k c h)`.
#[derive(Debug, Clone)]
pub struct GridEstimate {
    pub grid: Grid2D,
    /// Row-major like [`crate::discretization::GridField`]; boundary nodes included.
    pub values: Vec<ErrorEstimate>,
}

impl GridEstimate {
    pub fn get(&self, jj: usize, kk: usize) -> ErrorEstimate {
        self.values[self.grid.index(jj, kk)]
    }

    /// Node with the largest `|total|`.
    pub fn argmax_total(&self) -> (usize, usize, ErrorEstimate) {
        let (i, e) = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total.abs().total_cmp(&b.1.total.abs()))
            .expect("grid is nonempty");
        (i / self.grid.ny, i % self.grid.ny, *e)
    }
}

/// Lattice index of a coordinate, if it is one.
fn lattice_index(v: f64, h: f64) -> Result<i64> {
    let s = v / h;
    let r = s.round();
    if (s - r).abs() > 1e-9 {
        return invalid(format!("coordinate {v} is not a multiple of the mesh width {h}"));
    }
    Ok(r as i64)
}

/// Error prediction on a whole grid: the low-wavenumber part from the operator form,
/// the high-wavenumber part from a [`HighWavenumberTable`] of the given window.
pub fn estimate_grid(
    grid: Grid2D,
    mp: &ModelParams,
    sp: &SchemeParams,
    spec: &QuadratureSpec,
    window: usize,
) -> Result<GridEstimate> {
    let h = sp.h;
    if (grid.h1 - h).abs() > 1e-12 * h || (grid.h2 - sp.c * h).abs() > 1e-12 * h {
        return Err(Error::GridMismatch(format!(
            "grid widths ({}, {}) do not match h = {h}, c = {}",
            grid.h1, grid.h2, sp.c
        )));
    }
    let low = LowWavenumberOperator::new(mp, sp)?;
    let js = (0..grid.nx).map(|jj| lattice_index(grid.x(jj), grid.h1)).collect::<Result<Vec<_>>>()?;
    let ks = (0..grid.ny).map(|kk| lattice_index(grid.y(kk), grid.h2)).collect::<Result<Vec<_>>>()?;
    // No wider than the grid itself needs.
    let reach = js.iter().chain(&ks).map(|i| i.unsigned_abs() as usize).max().unwrap_or(0);
    let high = HighWavenumberTable::new(window.min(reach), mp, sp, spec)?;
    let cs = is_crank_nicolson_like(sp.theta);
    let (cs_j, cs_k) = if cs {
        let ij = js.iter().map(|&j| cs_integral(j, sp.lambda, sp.n0, spec)).collect::<Result<Vec<_>>>()?;
        let ik = ks.iter().map(|&k| cs_integral(k, sp.lambda / sp.c, sp.n0, spec)).collect::<Result<Vec<_>>>()?;
        (ij, ik)
    } else {
        (Vec::new(), Vec::new())
    };
    let low_scale = h * h;
    let high_scale = h.powi(2 * sp.n0 as i32 - 2);
    let cs_scale = h.powi(2 * sp.n0 as i32 - 1) * parity_sign(sp);
    let mut values = Vec::with_capacity(grid.len());
    for jj in 0..grid.nx {
        let x = grid.x(jj);
        for kk in 0..grid.ny {
            let y = grid.y(kk);
            let e_low = low_scale * low.eval(x, y);
            let e_high = high_scale * high.get(js[jj], ks[kk]);
            let e_cs = if cs {
                let a = normal_density((y + mp.a2) / SQRT_2) / (2.0 * SQRT_2 * PI) * cs_j[jj];
                let b = normal_density((x + mp.a1) / SQRT_2) / (2.0 * SQRT_2 * sp.c * PI) * cs_k[kk];
                cs_scale * (a + b)
            } else {
                0.0
            };
            values.push(ErrorEstimate::new(e_low, e_high, e_cs));
        }
    }
    Ok(GridEstimate { grid, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reference() -> ModelParams {
        ModelParams::reference()
    }

    fn scheme(theta: f64, lambda: f64, n0: usize, inv_h: usize) -> SchemeParams {
        SchemeParams::new(theta, lambda, 1.0, n0, 1.0 / inv_h as f64).unwrap()
    }

    #[test]
    fn routes_agree_at_reference_points() {
        let mp = reference();
        let spec = QuadratureSpec::default();
        for sp in [scheme(1.0 / 3.0, 0.4, 2, 64), scheme(0.5, 0.8, 0, 16), scheme(1.0, 0.2, 1, 16)] {
            for &(x, y) in &[(0.0, 0.0), (-2.0, -3.0), (-1.2, -4.1), (1.5, -0.5), (-4.0, -1.0)] {
                let q = c_low_quadrature(x, y, &mp, &sp, &spec).unwrap();
                let o = c_low_operator(x, y, &mp, &sp).unwrap();
                assert!(q.value.im.abs() < 1e-10, "imaginary part {}", q.value.im);
                assert!((q.value.re - o).abs() <= 1e-7 * o.abs().max(1e-12), "({x},{y}): {} vs {o}", q.value.re);
            }
        }
    }

    #[test]
    fn reflection_symmetry_without_drift() {
        let mp = ModelParams::new(0.0, 0.0, 0.0).unwrap();
        let sp = scheme(1.0 / 3.0, 0.4, 2, 16);
        let spec = QuadratureSpec::default();
        for &(x, y) in &[(0.3, -0.7), (1.1, 0.4), (2.0, 2.5)] {
            let a = c_low(x, y, &mp, &sp, &spec).unwrap();
            let b = c_low(-x, -y, &mp, &sp, &spec).unwrap();
            assert!((a - b).abs() < 1e-10 * a.abs().max(1e-12));
        }
    }

    #[test]
    fn rejects_inadmissible_theta() {
        let mp = reference();
        let sp = SchemeParams::new(0.25, 0.4, 1.0, 2, 1.0 / 16.0).unwrap();
        assert!(c_low_operator(0.0, 0.0, &mp, &sp).is_err());
        assert!(c_high(0, 0, &mp, &sp, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn high_peaks_at_origin() {
        let mp = reference();
        let spec = QuadratureSpec::default();
        let sp = scheme(1.0 / 3.0, 0.8, 0, 16);
        let c00 = c_high(0, 0, &mp, &sp, &spec).unwrap();
        for &(j, k) in &[(1, 0), (0, 1), (1, -1), (2, 3), (-3, 1), (5, 5)] {
            assert!(c_high(j, k, &mp, &sp, &spec).unwrap().abs() < c00.abs());
        }
    }

    #[test]
    fn high_grows_with_theta_and_shrinks_with_startup() {
        let mp = reference();
        let spec = QuadratureSpec::default();
        let c = |theta: f64, n0: usize| c_high(0, 0, &mp, &scheme(theta, 0.4, n0, 16), &spec).unwrap();
        assert!(c(1.0, 0) > c(0.5, 0) && c(0.5, 0) > c(1.0 / 3.0, 0));
        // The start-up damping shows in the error, where h^(2 n0 - 2) multiplies the constant.
        let h: f64 = 1.0 / 16.0;
        let damped = h * h * c(1.0 / 3.0, 2).abs();
        assert!(damped * 10.0 < c(1.0 / 3.0, 0).abs() / (h * h));
    }

    #[test]
    fn table_matches_pointwise_quadrature() {
        let mp = reference();
        let spec = QuadratureSpec::default();
        for sp in [scheme(1.0 / 3.0, 0.8, 0, 16), scheme(1.0, 0.4, 2, 16)] {
            let table = HighWavenumberTable::new(16, &mp, &sp, &spec).unwrap();
            let c00 = table.get(0, 0).abs();
            for &(j, k) in &[(0, 0), (1, 2), (-4, 3), (7, -7), (16, 0)] {
                let direct = c_high(j, k, &mp, &sp, &spec).unwrap();
                assert!((table.get(j, k) - direct).abs() <= 1e-8 * c00, "({j},{k})");
            }
            assert_eq!(table.get(17, 0), 0.0);
        }
    }

    #[test]
    fn table_edge_is_negligible() {
        let mp = reference();
        let spec = QuadratureSpec::default();
        let sp = scheme(1.0, 0.8, 0, 16);
        let table = HighWavenumberTable::new(DEFAULT_HIGH_WINDOW, &mp, &sp, &spec).unwrap();
        let w = DEFAULT_HIGH_WINDOW as i64;
        let edge = (-w..=w)
            .flat_map(|i| [(i, w), (w, i), (i, -w), (-w, i)])
            .fold(0.0f64, |m, (j, k)| m.max(table.get(j, k).abs()));
        assert!(edge < 1e-10 * table.get(0, 0).abs(), "edge {edge}");
    }

    #[test]
    fn cs_terms() {
        let mp = reference();
        let spec = QuadratureSpec::default();
        let sp = scheme(0.5, 0.4, 0, 16);
        assert!(c_cs(0, 0.0, &mp, &scheme(1.0 / 3.0, 0.4, 0, 16), &spec).is_err());
        let peak = c_cs(0, -mp.a2, &mp, &sp, &spec).unwrap().abs();
        assert!(c_cs(0, 0.0, &mp, &sp, &spec).unwrap().abs() < peak);
        assert!(c_cs(64, -mp.a2, &mp, &sp, &spec).unwrap().abs() < peak / 10.0);
        let mirror = c_cs_mirror(-mp.a1, 0, &mp, &sp, &spec).unwrap();
        assert!((mirror - peak).abs() < 1e-12 * peak, "c = 1 makes the two terms mirror images");
    }

    #[test]
    fn parity_flips_only_the_cs_term() {
        let mp = reference();
        let spec = QuadratureSpec::default();
        let h = 1.0 / 16.0;
        let a = SchemeParams::with_steps(0.5, 40, 0, 1.0, h, 1.0).unwrap();
        let b = SchemeParams::with_steps(0.5, 41, 0, 1.0 * 41.0 / 40.0, h, 1.0).unwrap();
        let ea = total_error_estimate(0, -48, &mp, &a, &spec).unwrap();
        let eb = total_error_estimate(0, -48, &mp, &b, &spec).unwrap();
        assert!(ea.e_cs != 0.0);
        assert!((ea.e_cs + eb.e_cs).abs() < 1e-14 * ea.e_cs.abs());
        assert!((ea.e_low - eb.e_low).abs() < 1e-12 * ea.e_low.abs());
        assert!((ea.e_high - eb.e_high).abs() <= 1e-12 * ea.e_low.abs());
    }

    #[test]
    fn startup_hides_high_error() {
        let mp = reference();
        let spec = QuadratureSpec::default();
        let sp = scheme(1.0 / 3.0, 0.4, 2, 64);
        let e = total_error_estimate(0, 0, &mp, &sp, &spec).unwrap();
        assert!(e.e_high.abs() < 1e-3 * e.e_low.abs());
        assert_eq!(e.e_cs, 0.0);
        assert_eq!(e.total, e.e_low + e.e_high + e.e_cs);
    }

    #[test]
    fn high_error_overtakes_without_startup() {
        let mp = reference();
        let spec = QuadratureSpec::default();
        let crossover = [8, 16, 32, 64, 128, 256].into_iter().find(|&inv_h| {
            let e = total_error_estimate(0, 0, &mp, &scheme(1.0 / 3.0, 0.8, 0, inv_h), &spec).unwrap();
            e.e_high.abs() > e.e_low.abs()
        });
        assert!(crossover.is_some());
    }

    #[test]
    fn grid_estimate_matches_pointwise() {
        let mp = reference();
        let spec = QuadratureSpec::default();
        let sp = scheme(0.5, 0.4, 0, 8);
        let grid = Grid2D::truncated((-6.0, 6.0), sp.h, 1.0).unwrap();
        let est = estimate_grid(grid, &mp, &sp, &spec, 32).unwrap();
        for &(x, y) in &[(0.0, 0.0), (0.0, -3.0), (-2.0, 0.5), (1.0, 1.0)] {
            let (jj, kk) = grid.node_of(x, y).unwrap();
            let j = (x / sp.h).round() as i64;
            let k = (y / sp.h).round() as i64;
            let want = total_error_estimate(j, k, &mp, &sp, &spec).unwrap();
            let got = est.get(jj, kk);
            assert!((got.total - want.total).abs() < 1e-8 * want.total.abs().max(1e-12), "({x},{y})");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn routes_agree_for_random_parameters(
            rho in -0.9f64..0.9, a1 in -3.0f64..3.0, a2 in -3.0f64..3.0,
            theta in 0.34f64..1.0, n0 in 0usize..3, c in prop::sample::select(vec![0.5, 1.0, 2.0]),
            x in -4.0f64..4.0, y in -4.0f64..4.0,
        ) {
            let mp = ModelParams::new(rho, a1, a2).unwrap();
            prop_assume!(theta_admissible(theta, rho));
            let sp = SchemeParams::with_steps(theta, 20, n0, 1.0, 1.0 / 16.0, c).unwrap();
            let spec = QuadratureSpec::default();
            prop_assert!(c_low(x - a1, y - a2, &mp, &sp, &spec).is_ok());
        }
    }
}
