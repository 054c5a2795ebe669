//! Krylov solve for the implicit Euler stage `(I - 1/2 Z) V = U`, whose matrix has the
//! full nine-point stencil of `A0 + A1 + A2`.

use crate::error::{Error, Result};

/// Outcome of one iterative solve.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveStats {
    pub iterations: usize,
    /// Final true residual `||b - A x||_2 / ||b||_2`.
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Right-preconditioned BiCGSTAB.
///
/// `apply(x, y)` overwrites `y` with `A x`; `precond(v)` overwrites `v` with `M^-1 v`.
/// `x` holds the initial guess on entry. Converged when the true relative residual is
/// at most `tol`.
pub fn bicgstab(
    mut apply: impl FnMut(&[f64], &mut [f64]),
    mut precond: impl FnMut(&mut [f64]),
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iter: usize,
) -> Result<SolveStats> {
    let n = b.len();
    let bnorm = norm(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(SolveStats::default());
    }
    let mut r = vec![0.0; n];
    let mut r_hat = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut p_hat = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut s_hat = vec![0.0; n];
    let mut t = vec![0.0; n];

    let true_residual = |apply: &mut dyn FnMut(&[f64], &mut [f64]), x: &[f64], r: &mut [f64]| {
        apply(x, r);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        norm(r) / bnorm
    };

    let mut iterations = 0;
    let mut residual = true_residual(&mut apply, x, &mut r);
    // Restarting from the true residual guards against breakdown and against drift of
    // the recursively updated residual near machine precision.
    while residual > tol && iterations < max_iter {
        let start = iterations;
        r_hat.copy_from_slice(&r);
        p.iter_mut().for_each(|e| *e = 0.0);
        v.iter_mut().for_each(|e| *e = 0.0);
        let (mut rho_old, mut alpha, mut omega) = (1.0, 1.0, 1.0);
        while iterations < max_iter {
            let rho = dot(&r_hat, &r);
            if rho == 0.0 || omega == 0.0 {
                break;
            }
            iterations += 1;
            let beta = (rho / rho_old) * (alpha / omega);
            for i in 0..n {
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
            }
            p_hat.copy_from_slice(&p);
            precond(&mut p_hat);
            apply(&p_hat, &mut v);
            let rv = dot(&r_hat, &v);
            if rv == 0.0 {
                break;
            }
            alpha = rho / rv;
            for i in 0..n {
                s[i] = r[i] - alpha * v[i];
            }
            if norm(&s) / bnorm <= 0.1 * tol {
                for i in 0..n {
                    x[i] += alpha * p_hat[i];
                }
                r.copy_from_slice(&s);
                break;
            }
            s_hat.copy_from_slice(&s);
            precond(&mut s_hat);
            apply(&s_hat, &mut t);
            let tt = dot(&t, &t);
            omega = if tt == 0.0 { 0.0 } else { dot(&t, &s) / tt };
            for i in 0..n {
                x[i] += alpha * p_hat[i] + omega * s_hat[i];
                r[i] = s[i] - omega * t[i];
            }
            rho_old = rho;
            if norm(&r) / bnorm <= 0.1 * tol {
                break;
            }
        }
        let previous = residual;
        residual = true_residual(&mut apply, x, &mut r);
        if iterations == start || residual.is_nan() || (residual >= previous && residual > tol) {
            break;
        }
    }
    // Written so that a NaN residual counts as failure.
    if !(residual <= tol) {
        return Err(Error::NoConvergence {
            iterations,
            residual,
        });
    }
    Ok(SolveStats {
        iterations,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_nonsymmetric_tridiagonal() {
        let n = 50;
        let apply = |x: &[f64], y: &mut [f64]| {
            for i in 0..n {
                let l = if i > 0 { x[i - 1] } else { 0.0 };
                let r = if i + 1 < n { x[i + 1] } else { 0.0 };
                y[i] = 3.0 * x[i] - 1.5 * l - 0.5 * r;
            }
        };
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let mut x = vec![0.0; n];
        let stats = bicgstab(apply, |_| {}, &b, &mut x, 1e-12, 200).unwrap();
        assert!(stats.residual <= 1e-12 && stats.iterations > 0);
        let mut ax = vec![0.0; n];
        apply(&x, &mut ax);
        assert!(ax.iter().zip(&b).all(|(a, b)| (a - b).abs() < 1e-10));
    }

    #[test]
    fn nan_is_not_convergence() {
        let b = vec![1.0; 4];
        let mut x = vec![0.0; 4];
        let res = bicgstab(|_, y: &mut [f64]| y.fill(f64::NAN), |_| {}, &b, &mut x, 1e-10, 10);
        assert!(matches!(res, Err(Error::NoConvergence { .. })));
    }
}
