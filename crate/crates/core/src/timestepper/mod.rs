//! Modified Craig-Sneyd time stepping with implicit Euler start-up.
//!
//! With `Z = dt A = Z0 + Z1 + Z2` one step maps `U` to `U_new` through
//!
//! ```text
//! Y0 = (I + Z) U
//! (I - theta Zi) Yi = Y(i-1) - theta Zi U          i = 1, 2
//! Yhat0 = Y0 + theta Z0 (Y2 - U)
//! Ytil0 = Yhat0 + (1/2 - theta) Z (Y2 - U)
//! (I - theta Zi) Ytili = Ytil(i-1) - theta Zi U    i = 1, 2
//! U_new = Ytil2
//! ```
//!
//! The first `n0` steps are each replaced by two implicit Euler half steps
//! `(I - Z/2) V = U`.

mod nine_point;
pub mod periodic;
mod spectral;
mod tridiagonal;

use std::fmt;

pub use nine_point::{bicgstab, SolveStats};
pub use spectral::{ConstantStencil, SpectralInverse};
pub use tridiagonal::{tridiagonal_solve, CyclicFactor, ThomasFactor};

use crate::discretization::{Direction, GridField, StencilOperators};
use crate::error::{invalid, Result};
use crate::fourier::theta_admissible;

/// Relative residual required of every implicit Euler solve.
pub const EULER_TOLERANCE: f64 = 1e-11;

const EULER_MAX_ITER: usize = 2000;

/// Time discretisation controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeParams {
    pub theta: f64,
    /// `dt / h`
    pub lambda: f64,
    /// Mesh ratio `h2 / h1`.
    pub c: f64,
    /// Number of start-up steps replaced by implicit Euler half steps.
    pub n0: usize,
    /// Mesh width `h = h1`.
    pub h: f64,
    pub n_steps: usize,
    pub dt: f64,
    pub horizon: f64,
}

impl SchemeParams {
    /// Unit horizon with `dt = lambda h`; `1 / (lambda h)` must be a whole number of steps.
    pub fn new(theta: f64, lambda: f64, c: f64, n0: usize, h: f64) -> Result<Self> {
        if !(lambda > 0.0) || !(h > 0.0) {
            return invalid(format!("lambda and h must be positive, got {lambda} and {h}"));
        }
        let steps = 1.0 / (lambda * h);
        let rounded = steps.round();
        if rounded < 1.0 || (steps - rounded).abs() > 1e-9 * steps {
            let n = rounded.max(1.0);
            return invalid(format!(
                "1/(lambda h) = {steps} is not a whole number of steps; nearest valid lambda is {}",
                1.0 / (n * h)
            ));
        }
        Self::with_steps(theta, rounded as usize, n0, 1.0, h, c)
    }

    /// `n_steps` equal steps over `[0, horizon]`.
    pub fn with_steps(theta: f64, n_steps: usize, n0: usize, horizon: f64, h: f64, c: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return invalid(format!("theta must be positive, got {theta}"));
        }
        if n_steps == 0 {
            return invalid("at least one time step is required");
        }
        if n0 > n_steps {
            return invalid(format!("n0 = {n0} exceeds the number of steps {n_steps}"));
        }
        if !(horizon > 0.0) || !(h > 0.0) || !(c > 0.0) {
            return invalid("horizon, h and c must be positive");
        }
        let dt = horizon / n_steps as f64;
        Ok(Self {
            theta,
            lambda: dt / h,
            c,
            n0,
            h,
            n_steps,
            dt,
            horizon,
        })
    }

    /// True when `theta` lies outside the range with guaranteed unconditional stability.
    pub fn stability_warning(&self, rho: f64) -> bool {
        !theta_admissible(self.theta, rho)
    }
}

/// Operator data the step driver needs: application of the scaled split operators and
/// factorised solves with `I - s A1` and `I - s A2`.
pub trait SplitOperator {
    type Factor;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `out += s * A_part u`.
    fn add_part(&self, part: Direction, u: &[f64], s: f64, out: &mut [f64]);

    /// Factors of `I - s A_part` for `part` X or Y.
    fn factor(&self, part: Direction, s: f64) -> Result<Self::Factor>;

    /// Overwrite `x` with `(I - s A_part)^-1 x`.
    fn solve(&self, factor: &Self::Factor, x: &mut [f64]);

    fn add_full(&self, u: &[f64], s: f64, out: &mut [f64]) {
        self.add_part(Direction::Mixed, u, s, out);
        self.add_part(Direction::X, u, s, out);
        self.add_part(Direction::Y, u, s, out);
    }

    /// FFT inverse of the periodic counterpart of `I - s A`, when the stencil has
    /// constant coefficients. Used to precondition the implicit Euler solves.
    fn spectral_inverse(&self, _s: f64) -> Result<Option<SpectralInverse>> {
        Ok(None)
    }
}

/// Preconditioner of the implicit Euler stage.
enum EulerPrecond<F> {
    /// `(I - s A2)^-1 (I - s A1)^-1`
    Lines(F, F),
    Spectral(SpectralInverse),
}

impl<F> EulerPrecond<F> {
    fn new<O: SplitOperator<Factor = F>>(op: &O, s: f64) -> Result<Self> {
        Ok(match op.spectral_inverse(s)? {
            Some(inv) => EulerPrecond::Spectral(inv),
            None => EulerPrecond::Lines(op.factor(Direction::X, s)?, op.factor(Direction::Y, s)?),
        })
    }

    fn apply<O: SplitOperator<Factor = F>>(&self, op: &O, v: &mut [f64]) {
        match self {
            EulerPrecond::Lines(fx, fy) => {
                op.solve(fy, v);
                op.solve(fx, v);
            }
            EulerPrecond::Spectral(inv) => inv.solve(v),
        }
    }
}

/// Factors of the x and y line systems on a Dirichlet grid.
#[derive(Debug, Clone)]
pub struct LineFactor {
    part: Direction,
    thomas: ThomasFactor,
}

impl SplitOperator for StencilOperators {
    type Factor = LineFactor;

    fn len(&self) -> usize {
        self.grid.len()
    }

    fn add_part(&self, part: Direction, u: &[f64], s: f64, out: &mut [f64]) {
        StencilOperators::add_part(self, part, u, s, out)
    }

    fn factor(&self, part: Direction, s: f64) -> Result<LineFactor> {
        let line = match part {
            Direction::X => &self.a1,
            Direction::Y => &self.a2,
            Direction::Mixed => return invalid("the mixed-derivative part has no line factorisation"),
        };
        let n = line.len();
        // Boundary rows are identity rows so boundary values pass through unchanged.
        let mut sub = vec![0.0; n];
        let mut diag = vec![1.0; n];
        let mut sup = vec![0.0; n];
        for i in 1..n - 1 {
            sub[i] = -s * line.lower[i];
            diag[i] = 1.0 - s * line.diag[i];
            sup[i] = -s * line.upper[i];
        }
        Ok(LineFactor {
            part,
            thomas: ThomasFactor::new(&sub, &diag, &sup)?,
        })
    }

    fn spectral_inverse(&self, s: f64) -> Result<Option<SpectralInverse>> {
        let Some(stencil) = self.constant_stencil() else {
            return Ok(None);
        };
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        SpectralInverse::new(stencil, s, (nx, ny), 1, (nx - 2, ny - 2)).map(Some)
    }

    fn solve(&self, factor: &LineFactor, x: &mut [f64]) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        match factor.part {
            Direction::X => factor.thomas.solve_columns(x, ny, 1..ny - 1),
            _ => factor.thomas.solve_rows(x, ny, 1..nx - 1),
        }
    }
}

/// Work counters and solver diagnostics of a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub mcs_steps: usize,
    pub euler_half_steps: usize,
    /// Tridiagonal stage solves, each covering every grid line of one direction.
    pub line_solves: usize,
    pub euler_iterations: usize,
    pub euler_max_iterations: usize,
    pub euler_max_residual: f64,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mcs_steps: {}", self.mcs_steps)?;
        writeln!(f, "euler_half_steps: {}", self.euler_half_steps)?;
        writeln!(f, "line_solves: {}", self.line_solves)?;
        writeln!(f, "euler_iterations: {}", self.euler_iterations)?;
        writeln!(f, "euler_max_iterations: {}", self.euler_max_iterations)?;
        writeln!(f, "euler_max_residual: {:.3e}", self.euler_max_residual)
    }
}

/// Owns the factorisations and stage buffers of one run.
pub struct Stepper<'a, O: SplitOperator> {
    op: &'a O,
    sp: SchemeParams,
    fx: O::Factor,
    fy: O::Factor,
    half: Option<EulerPrecond<O::Factor>>,
    euler_tol: f64,
    z0u: Vec<f64>,
    z1u: Vec<f64>,
    z2u: Vec<f64>,
    y0: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
    report: RunReport,
}

impl<'a, O: SplitOperator> Stepper<'a, O> {
    pub fn new(op: &'a O, sp: SchemeParams) -> Result<Self> {
        let s = sp.theta * sp.dt;
        let n = op.len();
        Ok(Self {
            op,
            sp,
            fx: op.factor(Direction::X, s)?,
            fy: op.factor(Direction::Y, s)?,
            half: None,
            euler_tol: EULER_TOLERANCE,
            z0u: vec![0.0; n],
            z1u: vec![0.0; n],
            z2u: vec![0.0; n],
            y0: vec![0.0; n],
            y: vec![0.0; n],
            d: vec![0.0; n],
            report: RunReport::default(),
        })
    }

    /// Overrides the relative residual demanded of the implicit Euler solves.
    pub fn with_euler_tolerance(mut self, tol: f64) -> Self {
        self.euler_tol = tol;
        self
    }

    pub fn params(&self) -> &SchemeParams {
        &self.sp
    }

    pub fn report(&self) -> &RunReport {
        &self.report
    }

    fn check_len(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.op.len() {
            return Err(crate::error::Error::GridMismatch(format!(
                "vector of length {} for an operator of size {}",
                u.len(),
                self.op.len()
            )));
        }
        Ok(())
    }

    /// One MCS step in place.
    pub fn mcs_step(&mut self, u: &mut [f64]) -> Result<()> {
        self.check_len(u)?;
        let op = self.op;
        let (theta, dt) = (self.sp.theta, self.sp.dt);
        for (buf, part) in [
            (&mut self.z0u, Direction::Mixed),
            (&mut self.z1u, Direction::X),
            (&mut self.z2u, Direction::Y),
        ] {
            buf.iter_mut().for_each(|v| *v = 0.0);
            op.add_part(part, u, dt, buf);
        }
        let n = u.len();
        // Y0, and the right-hand side of the Y1 stage
        for i in 0..n {
            let y0 = u[i] + self.z0u[i] + self.z1u[i] + self.z2u[i];
            self.y0[i] = y0;
            self.y[i] = y0 - theta * self.z1u[i];
        }
        op.solve(&self.fx, &mut self.y);
        for i in 0..n {
            self.y[i] -= theta * self.z2u[i];
        }
        op.solve(&self.fy, &mut self.y);
        for i in 0..n {
            self.d[i] = self.y[i] - u[i];
            self.y[i] = self.y0[i];
        }
        // Ytil0 = Y0 + theta Z0 d + (1/2 - theta) Z d, built in y; the two Z0 terms combine.
        op.add_part(Direction::Mixed, &self.d, 0.5 * dt, &mut self.y);
        op.add_part(Direction::X, &self.d, (0.5 - theta) * dt, &mut self.y);
        op.add_part(Direction::Y, &self.d, (0.5 - theta) * dt, &mut self.y);
        for i in 0..n {
            self.y[i] -= theta * self.z1u[i];
        }
        op.solve(&self.fx, &mut self.y);
        for i in 0..n {
            self.y[i] -= theta * self.z2u[i];
        }
        op.solve(&self.fy, &mut self.y);
        u.copy_from_slice(&self.y);
        self.report.mcs_steps += 1;
        self.report.line_solves += 4;
        Ok(())
    }

    /// One implicit Euler half step `(I - Z/2) V = U` in place.
    pub fn euler_half_step(&mut self, u: &mut [f64]) -> Result<SolveStats> {
        self.check_len(u)?;
        let op = self.op;
        let s = 0.5 * self.sp.dt;
        if self.half.is_none() {
            self.half = Some(EulerPrecond::new(op, s)?);
        }
        let precond = self.half.as_ref().expect("built above");
        self.y.copy_from_slice(u);
        let stats = bicgstab(
            |x, out| {
                out.copy_from_slice(x);
                op.add_full(x, -s, out);
            },
            |v| precond.apply(op, v),
            u,
            &mut self.y,
            self.euler_tol,
            EULER_MAX_ITER,
        )?;
        u.copy_from_slice(&self.y);
        let r = &mut self.report;
        r.euler_half_steps += 1;
        r.euler_iterations += stats.iterations;
        r.euler_max_iterations = r.euler_max_iterations.max(stats.iterations);
        r.euler_max_residual = r.euler_max_residual.max(stats.residual);
        Ok(stats)
    }

    /// `2 min(n0, N)` implicit Euler half steps.
    pub fn rannacher_startup(&mut self, u: &mut [f64]) -> Result<()> {
        for _ in 0..2 * self.sp.n0.min(self.sp.n_steps) {
            self.euler_half_step(u)?;
        }
        Ok(())
    }

    /// Start-up followed by `N - n0` MCS steps.
    pub fn integrate(&mut self, u: &mut [f64]) -> Result<()> {
        self.rannacher_startup(u)?;
        for _ in self.sp.n0.min(self.sp.n_steps)..self.sp.n_steps {
            self.mcs_step(u)?;
        }
        Ok(())
    }
}

/// One MCS step of `u` under `ops`.
pub fn mcs_step(u: &GridField, ops: &StencilOperators, sp: &SchemeParams) -> Result<GridField> {
    u.check_grid(&ops.grid)?;
    let mut out = u.clone();
    Stepper::new(ops, *sp)?.mcs_step(&mut out.values)?;
    Ok(out)
}

/// The implicit Euler start-up alone.
pub fn rannacher_startup(u: &GridField, ops: &StencilOperators, sp: &SchemeParams) -> Result<(GridField, RunReport)> {
    u.check_grid(&ops.grid)?;
    let mut out = u.clone();
    let mut stepper = Stepper::new(ops, *sp)?;
    stepper.rannacher_startup(&mut out.values)?;
    Ok((out, stepper.report().clone()))
}

/// The full run from `u0` to `U_N`.
pub fn integrate(u0: &GridField, ops: &StencilOperators, sp: &SchemeParams) -> Result<(GridField, RunReport)> {
    u0.check_grid(&ops.grid)?;
    let mut out = u0.clone();
    let mut stepper = Stepper::new(ops, *sp)?;
    stepper.integrate(&mut out.values)?;
    Ok((out, stepper.report().clone()))
}

/// Solve `(I - dt/2 A) V = rhs` with boundary values of `rhs` passed through.
pub fn nine_point_solve(ops: &StencilOperators, dt: f64, rhs: &GridField, tol: f64) -> Result<(GridField, SolveStats)> {
    rhs.check_grid(&ops.grid)?;
    let s = 0.5 * dt;
    let precond = EulerPrecond::new(ops, s)?;
    let mut x = rhs.values.clone();
    let stats = bicgstab(
        |v, out| {
            out.copy_from_slice(v);
            ops.add_full(v, -s, out);
        },
        |v| precond.apply(ops, v),
        &rhs.values,
        &mut x,
        tol,
        EULER_MAX_ITER,
    )?;
    Ok((GridField::from_values(ops.grid, x)?, stats))
}

#[cfg(test)]
mod tests;
