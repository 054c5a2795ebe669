//! Experiment drivers behind the `mcs` binary, and their CSV output.
//!
//! Numbers are written with `{:.16e}`, i.e. 17 significant digits, so every CSV is
//! byte-for-byte reproducible from its config.

use std::f64::consts::PI;
use std::io::Write;
use std::thread;

use crate::config::{BsConfig, RunConfig};
use crate::discretization::{cash_or_nothing_initial, cross_gamma_dirac_initial, dirac_initial, GridField, StencilOperators};
use crate::error::{Error, Result};
use crate::erroranalysis::{estimate_grid, GridEstimate, DEFAULT_HIGH_WINDOW};
use crate::fourier::{numerical_fourier_un, FourierPoint};
use crate::model::{exact_solution, BSParams};
use crate::timestepper::{integrate, RunReport, SchemeParams};

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// The model problem on the grid of `1 / inv_h`, integrated to `T = 1`.
pub fn run_solve(cfg: &RunConfig, inv_h: usize) -> Result<(GridField, RunReport)> {
    let grid = cfg.model_grid(inv_h)?;
    let sp = cfg.scheme_for(inv_h)?;
    let ops = StencilOperators::model(grid, &cfg.model);
    integrate(&dirac_initial(grid)?, &ops, &sp)
}

/// Largest `|e|` of each predicted component over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedMax {
    pub e_low: f64,
    pub e_high: f64,
    pub e_cs: f64,
    pub total: f64,
}

impl PredictedMax {
    fn over_interior(est: &GridEstimate) -> Self {
        let g = est.grid;
        let mut m = Self {
            e_low: 0.0,
            e_high: 0.0,
            e_cs: 0.0,
            total: 0.0,
        };
        for j in 1..g.nx - 1 {
            for k in 1..g.ny - 1 {
                let e = est.get(j, k);
                m.e_low = m.e_low.max(e.e_low.abs());
                m.e_high = m.e_high.max(e.e_high.abs());
                m.e_cs = m.e_cs.max(e.e_cs.abs());
                m.total = m.total.max(e.total.abs());
            }
        }
        m
    }

    fn nan() -> Self {
        Self {
            e_low: f64::NAN,
            e_high: f64::NAN,
            e_cs: f64::NAN,
            total: f64::NAN,
        }
    }
}

/// Outcome of one mesh width of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub inv_h: usize,
    pub n_steps: usize,
    /// Max-norm error over interior nodes.
    pub error: f64,
    /// Location of the largest error.
    pub x_max: f64,
    pub y_max: f64,
    /// Error at the origin, signed.
    pub error_origin: f64,
    /// `log2(err(2h) / err(h))`, NaN on the first row.
    pub order: f64,
    /// NaN where the prediction does not apply, e.g. for an inadmissible `theta`.
    pub predicted: PredictedMax,
    pub report: RunReport,
    /// Set when the solve failed; the numeric columns are then NaN.
    pub failure: Option<String>,
}

fn convergence_row(cfg: &RunConfig, inv_h: usize) -> ConvergenceRow {
    let n_steps = cfg.scheme_for(inv_h).map(|sp| sp.n_steps).unwrap_or(0);
    let failed = |e: Error| ConvergenceRow {
        inv_h,
        n_steps,
        error: f64::NAN,
        x_max: f64::NAN,
        y_max: f64::NAN,
        error_origin: f64::NAN,
        order: f64::NAN,
        predicted: PredictedMax::nan(),
        report: RunReport::default(),
        failure: Some(e.to_string()),
    };
    let run = || -> Result<ConvergenceRow> {
        let (u, report) = run_solve(cfg, inv_h)?;
        let grid = u.grid;
        let exact = GridField::from_fn(grid, |x, y| exact_solution(x, y, 1.0, &cfg.model).unwrap_or(f64::NAN));
        let (error, j, k) = u.max_abs_diff_interior(&exact)?;
        let error_origin = grid
            .node_of(0.0, 0.0)
            .map(|(j0, k0)| u.get(j0, k0) - exact.get(j0, k0))
            .unwrap_or(f64::NAN);
        let sp = cfg.scheme_for(inv_h)?;
        let predicted = match estimate_grid(grid, &cfg.model, &sp, &cfg.quadrature, DEFAULT_HIGH_WINDOW) {
            Ok(est) => PredictedMax::over_interior(&est),
            Err(_) => PredictedMax::nan(),
        };
        Ok(ConvergenceRow {
            inv_h,
            n_steps,
            error,
            x_max: grid.x(j),
            y_max: grid.y(k),
            error_origin,
            order: f64::NAN,
            predicted,
            report,
            failure: None,
        })
    };
    run().unwrap_or_else(failed)
}

/// One row per ladder entry. Rows run on separate threads; the result is in ladder order.
pub fn run_convergence(cfg: &RunConfig) -> Vec<ConvergenceRow> {
    let mut rows: Vec<ConvergenceRow> = thread::scope(|s| {
        let handles: Vec<_> = cfg
            .mesh
            .inv_h
            .iter()
            .map(|&inv_h| s.spawn(move || convergence_row(cfg, inv_h)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep thread panicked")).collect()
    });
    for i in 1..rows.len() {
        let (a, b) = (&rows[i - 1], &rows[i]);
        if b.inv_h == 2 * a.inv_h {
            rows[i].order = (a.error / b.error).log2();
        }
    }
    rows
}

pub const CONVERGENCE_HEADER: &str =
    "inv_h,h,n_steps,error,x_max,y_max,error_origin,order,e_low,e_high,e_cs,total,euler_iterations,status";

pub fn write_convergence_csv<W: Write>(rows: &[ConvergenceRow], mut w: W) -> Result<()> {
    writeln!(w, "{CONVERGENCE_HEADER}")?;
    for r in rows {
        let p = r.predicted;
        let cols = [
            r.inv_h.to_string(),
            num(1.0 / r.inv_h as f64),
            r.n_steps.to_string(),
            num(r.error),
            num(r.x_max),
            num(r.y_max),
            num(r.error_origin),
            num(r.order),
            num(p.e_low),
            num(p.e_high),
            num(p.e_cs),
            num(p.total),
            r.report.euler_iterations.to_string(),
            if r.failure.is_some() { "failed" } else { "ok" }.to_string(),
        ];
        writeln!(w, "{}", cols.join(","))?;
    }
    Ok(())
}

/// One sample of `|U_N|` on the `(theta1, theta2)` square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierSample {
    pub theta1: f64,
    pub theta2: f64,
    pub modulus: f64,
}

/// `|U_N(theta1, theta2)|` on a `points x points` grid over `[-pi, pi]^2`, for `1 / inv_h`.
pub fn run_fourier_map(cfg: &RunConfig, inv_h: usize) -> Result<Vec<FourierSample>> {
    let sp = cfg.scheme_for(inv_h)?;
    fourier_map(cfg, &sp)
}

pub fn fourier_map(cfg: &RunConfig, sp: &SchemeParams) -> Result<Vec<FourierSample>> {
    let n = cfg.fourier.points;
    let axis = |i: usize| -PI + 2.0 * PI * i as f64 / (n - 1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let fp = FourierPoint::new(axis(a), axis(b))?;
            out.push(FourierSample {
                theta1: fp.theta1,
                theta2: fp.theta2,
                modulus: numerical_fourier_un(fp, &cfg.model, sp).norm(),
            });
        }
    }
    Ok(out)
}

pub fn write_fourier_csv<W: Write>(samples: &[FourierSample], mut w: W) -> Result<()> {
    writeln!(w, "theta1,theta2,modulus")?;
    for s in samples {
        writeln!(w, "{},{},{}", num(s.theta1), num(s.theta2), num(s.modulus))?;
    }
    Ok(())
}

/// Error prediction at every node of the domain for `1 / inv_h`.
pub fn run_estimate(cfg: &RunConfig, inv_h: usize) -> Result<GridEstimate> {
    let sp = cfg.scheme_for(inv_h)?;
    let grid = cfg.model_grid(inv_h)?;
    estimate_grid(grid, &cfg.model, &sp, &cfg.quadrature, DEFAULT_HIGH_WINDOW)
}

/// Rows `j,k,x,y,e_low,e_high,e_cs,total` with lattice indices `j = x / h1`, `k = y / h2`.
pub fn write_estimate_csv<W: Write>(est: &GridEstimate, mut w: W) -> Result<()> {
    writeln!(w, "j,k,x,y,e_low,e_high,e_cs,total")?;
    let g = est.grid;
    for jj in 0..g.nx {
        let x = g.x(jj);
        for kk in 0..g.ny {
            let y = g.y(kk);
            let e = est.get(jj, kk);
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                (x / g.h1).round() as i64,
                (y / g.h2).round() as i64,
                num(x),
                num(y),
                num(e.e_low),
                num(e.e_high),
                num(e.e_cs),
                num(e.total)
            )?;
        }
    }
    Ok(())
}

/// Option value and cross gamma at maturity.
#[derive(Debug, Clone, PartialEq)]
pub struct BsDemo {
    pub value: GridField,
    pub cross_gamma: GridField,
    /// [`diagonal_oscillation`] of the cross gamma.
    pub oscillation: f64,
    pub value_report: RunReport,
    pub gamma_report: RunReport,
}

/// Solves the cash-or-nothing value problem and the cross-gamma problem with `n0`
/// implicit Euler start-up steps.
///
/// The value is computed for `w = exp(r t) u`, which removes the reaction term; the
/// Dirichlet data of `w` is the payoff itself, and `u = exp(-r T) w`. The cross gamma
/// has zero Dirichlet data.
pub fn run_bs_demo(bs_cfg: &BsConfig, theta: f64, n0: usize) -> Result<BsDemo> {
    let bs = bs_cfg.params();
    bs.validate()?;
    let grid = bs_cfg.grid()?;
    let sp = SchemeParams::with_steps(theta, bs_cfg.steps, n0, bs.maturity, grid.h1, 1.0)?;

    let value_ops = StencilOperators::black_scholes(grid, &bs, bs.r, bs.r, 0.0);
    let (mut value, value_report) = integrate(&cash_or_nothing_initial(grid, &bs), &value_ops, &sp)?;
    let discount = (-bs.r * bs.maturity).exp();
    value.values.iter_mut().for_each(|v| *v *= discount);

    let (mu1, mu2, q) = cross_gamma_coefficients(&bs);
    let gamma_ops = StencilOperators::black_scholes(grid, &bs, mu1, mu2, q);
    let (cross_gamma, gamma_report) = integrate(&cross_gamma_dirac_initial(grid, &bs)?, &gamma_ops, &sp)?;
    let oscillation = diagonal_oscillation(&cross_gamma, bs.strike1, bs.strike2)?;
    Ok(BsDemo {
        value,
        cross_gamma,
        oscillation,
        value_report,
        gamma_report,
    })
}

/// Drifts and reaction of the cross-gamma equation:
/// `mu_i = r + sigma_i^2 + rho sigma1 sigma2`, `q = r + rho sigma1 sigma2`.
pub fn cross_gamma_coefficients(bs: &BSParams) -> (f64, f64, f64) {
    let c = bs.rho * bs.sigma1 * bs.sigma2;
    (bs.r + bs.sigma1 * bs.sigma1 + c, bs.r + bs.sigma2 * bs.sigma2 + c, bs.r + c)
}

/// Sum of `|f(i+1) - 2 f(i) + f(i-1)|` along the grid diagonal through the node `(s1, s2)`.
pub fn diagonal_oscillation(field: &GridField, s1: f64, s2: f64) -> Result<f64> {
    let g = field.grid;
    let (js, ks) = g
        .node_of(s1, s2)
        .ok_or_else(|| Error::InvalidParameter(format!("({s1}, {s2}) is not a grid node")))?;
    let back = js.min(ks);
    let (j0, k0) = (js - back, ks - back);
    let len = (g.nx - j0).min(g.ny - k0);
    let diag: Vec<f64> = (0..len).map(|i| field.get(j0 + i, k0 + i)).collect();
    Ok(diag.windows(3).map(|w| (w[2] - 2.0 * w[1] + w[0]).abs()).sum())
}

pub fn write_bs_csv<W: Write>(demo: &BsDemo, mut w: W) -> Result<()> {
    writeln!(w, "s1,s2,value,cross_gamma")?;
    let g = demo.value.grid;
    for j in 0..g.nx {
        for k in 0..g.ny {
            writeln!(
                w,
                "{},{},{},{}",
                num(g.x(j)),
                num(g.y(k)),
                num(demo.value.get(j, k)),
                num(demo.cross_gamma.get(j, k))
            )?;
        }
    }
    Ok(())
}

/// Plain-text column description written next to each CSV.
pub fn column_notes(mode: &str) -> &'static str {
    match mode {
        "solve" => "# x y value\n# numerical solution U_N of the model problem at T = 1\n",
        "convergence" => {
            "# inv_h h n_steps error x_max y_max error_origin order e_low e_high e_cs total euler_iterations status\n\
             # error: max-norm error over interior nodes at (x_max, y_max); error_origin: signed error at (0, 0)\n\
             # order: log2 of the error ratio to the previous row when h halves\n\
             # e_low e_high e_cs total: largest predicted magnitude of each component over interior nodes\n"
        }
        "fourier" => "# theta1 theta2 modulus\n# |U_N| of the numerical solution's discrete Fourier transform\n",
        "estimate" => "# j k x y e_low e_high e_cs total\n# predicted error components at (x, y) = (j h1, k h2)\n",
        "bsdemo" => "# s1 s2 value cross_gamma\n# cash-or-nothing value and its cross gamma at maturity\n",
        _ => "",
    }
}
