//! Inverse of `I - s A` for a constant-coefficient nine-point stencil on a periodic
//! block, by 2D FFT.
//!
//! On a Dirichlet grid the periodic inverse differs from the true one only through the
//! wrap-around couplings at the edges, where the solutions of interest are negligible,
//! which makes it a near-exact preconditioner for the implicit Euler stage.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Result};

/// Constant stencil weights: `(lower, diag, upper)` along x and y, and the weight `w`
/// of the cross stencil `w (u[j+1,k+1] - u[j+1,k-1] - u[j-1,k+1] + u[j-1,k-1])`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantStencil {
    pub x: (f64, f64, f64),
    pub y: (f64, f64, f64),
    pub cross: f64,
}

pub struct SpectralInverse {
    /// Full storage dimensions; the block starts at `(offset, offset)`.
    nx: usize,
    ny: usize,
    offset: usize,
    n1: usize,
    n2: usize,
    /// `1 / (1 - s sigma)` in transposed (`k`-major) layout.
    inv_symbol: Vec<Complex64>,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
    buf: RefCell<(Vec<Complex64>, Vec<Complex64>)>,
}

impl std::fmt::Debug for SpectralInverse {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralInverse")
            .field("n1", &self.n1)
            .field("n2", &self.n2)
            .field("offset", &self.offset)
            .finish()
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const TILE: usize = 32;
    for r0 in (0..rows).step_by(TILE) {
        for c0 in (0..cols).step_by(TILE) {
            for r in r0..(r0 + TILE).min(rows) {
                for c in c0..(c0 + TILE).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

impl SpectralInverse {
    /// Periodic `n1 x n2` block inside an `nx x ny` array, starting at `(offset, offset)`.
    pub fn new(
        stencil: ConstantStencil,
        s: f64,
        (nx, ny): (usize, usize),
        offset: usize,
        (n1, n2): (usize, usize),
    ) -> Result<Self> {
        if n1 == 0 || n2 == 0 || offset + n1 > nx || offset + n2 > ny {
            return invalid(format!("periodic block {n1}x{n2} at {offset} does not fit in {nx}x{ny}"));
        }
        let symbol = |(l, d, r): (f64, f64, f64), t: f64| {
            Complex64::new((l + r) * t.cos() + d, (r - l) * t.sin())
        };
        let mut inv_symbol = Vec::with_capacity(n1 * n2);
        for q in 0..n2 {
            let t2 = 2.0 * PI * q as f64 / n2 as f64;
            let sy = symbol(stencil.y, t2);
            for p in 0..n1 {
                let t1 = 2.0 * PI * p as f64 / n1 as f64;
                let sigma = symbol(stencil.x, t1) + sy - 4.0 * stencil.cross * t1.sin() * t2.sin();
                let den = 1.0 - s * sigma;
                if den.norm() == 0.0 {
                    return invalid("I - s A is singular on the periodic block");
                }
                inv_symbol.push(1.0 / den);
            }
        }
        let mut planner = FftPlanner::new();
        let zero = Complex64::new(0.0, 0.0);
        Ok(Self {
            nx,
            ny,
            offset,
            n1,
            n2,
            inv_symbol,
            row_fwd: planner.plan_fft_forward(n2),
            row_inv: planner.plan_fft_inverse(n2),
            col_fwd: planner.plan_fft_forward(n1),
            col_inv: planner.plan_fft_inverse(n1),
            buf: RefCell::new((vec![zero; n1 * n2], vec![zero; n1 * n2])),
        })
    }

    /// Overwrite the block of `x` with `(I - s A)^-1` applied to it; entries outside the
    /// block are left as they are.
    pub fn solve(&self, x: &mut [f64]) {
        assert_eq!(x.len(), self.nx * self.ny, "vector does not match the spectral block's storage");
        let (n1, n2, off, ny) = (self.n1, self.n2, self.offset, self.ny);
        let mut guard = self.buf.borrow_mut();
        let (a, b) = &mut *guard;
        for j in 0..n1 {
            let src = &x[(j + off) * ny + off..(j + off) * ny + off + n2];
            for (dst, &v) in a[j * n2..(j + 1) * n2].iter_mut().zip(src) {
                *dst = Complex64::new(v, 0.0);
            }
        }
        self.row_fwd.process(a);
        transpose(a, b, n1, n2);
        self.col_fwd.process(b);
        for (v, w) in b.iter_mut().zip(&self.inv_symbol) {
            *v *= w;
        }
        self.col_inv.process(b);
        transpose(b, a, n2, n1);
        self.row_inv.process(a);
        let scale = 1.0 / (n1 * n2) as f64;
        for j in 0..n1 {
            let dst = &mut x[(j + off) * ny + off..(j + off) * ny + off + n2];
            for (d, v) in dst.iter_mut().zip(&a[j * n2..(j + 1) * n2]) {
                *d = v.re * scale;
            }
        }
    }
}
