//! Tridiagonal solves for the line-implicit stages.

use crate::error::{Error, Result};

/// Solve `A x = rhs` for the tridiagonal `A` with sub-diagonal `sub` (`sub[0]` unused),
/// diagonal `diag` and super-diagonal `sup` (`sup[n-1]` unused). No pivoting.
pub fn tridiagonal_solve(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let f = ThomasFactor::new(sub, diag, sup)?;
    let mut x = rhs.to_vec();
    f.solve_in_place(&mut x);
    Ok(x)
}

/// LU factors of a tridiagonal matrix, reusable for any number of right-hand sides.
#[derive(Debug, Clone, PartialEq)]
pub struct ThomasFactor {
    lower: Vec<f64>,
    /// Reciprocal pivots.
    inv_pivot: Vec<f64>,
    /// Normalised super-diagonal `c_i / pivot_i`.
    upper: Vec<f64>,
}

impl ThomasFactor {
    pub fn new(sub: &[f64], diag: &[f64], sup: &[f64]) -> Result<Self> {
        let n = diag.len();
        assert!(sub.len() == n && sup.len() == n, "tridiagonal bands must have equal length");
        let mut inv_pivot = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut prev = 0.0;
        for i in 0..n {
            let l = if i > 0 { sub[i] } else { 0.0 };
            let pivot = diag[i] - l * prev;
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(Error::ZeroPivot { line: i });
            }
            inv_pivot[i] = 1.0 / pivot;
            upper[i] = if i + 1 < n { sup[i] * inv_pivot[i] } else { 0.0 };
            prev = upper[i];
        }
        let mut lower = sub.to_vec();
        if n > 0 {
            lower[0] = 0.0;
        }
        Ok(Self {
            lower,
            inv_pivot,
            upper,
        })
    }

    pub fn len(&self) -> usize {
        self.inv_pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_pivot.is_empty()
    }

    pub fn solve_in_place(&self, d: &mut [f64]) {
        let n = self.len();
        debug_assert_eq!(d.len(), n);
        if n == 0 {
            return;
        }
        d[0] *= self.inv_pivot[0];
        for i in 1..n {
            d[i] = (d[i] - self.lower[i] * d[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            d[i] -= self.upper[i] * d[i + 1];
        }
    }

    /// Solve for the right-hand sides `data[r * stride..r * stride + n]`, `r` in `rows`.
    ///
    /// Rows are swept in small interleaved blocks so that independent recurrences
    /// overlap instead of waiting on each other.
    pub fn solve_rows(&self, data: &mut [f64], stride: usize, rows: std::ops::Range<usize>) {
        const BLOCK: usize = 8;
        let n = self.len();
        if n == 0 {
            return;
        }
        let mut start = rows.start;
        while start < rows.end {
            let end = (start + BLOCK).min(rows.end);
            let base: Vec<usize> = (start..end).map(|r| r * stride).collect();
            for &b in &base {
                data[b] *= self.inv_pivot[0];
            }
            for i in 1..n {
                let (l, p) = (self.lower[i], self.inv_pivot[i]);
                for &b in &base {
                    data[b + i] = (data[b + i] - l * data[b + i - 1]) * p;
                }
            }
            for i in (0..n - 1).rev() {
                let c = self.upper[i];
                for &b in &base {
                    data[b + i] -= c * data[b + i + 1];
                }
            }
            start = end;
        }
    }

    /// Solve for many right-hand sides stored as the columns `cols` of a row-major
    /// block whose row `i` is `data[i * stride..(i + 1) * stride]`.
    pub fn solve_columns(&self, data: &mut [f64], stride: usize, cols: std::ops::Range<usize>) {
        let n = self.len();
        debug_assert_eq!(data.len(), n * stride);
        if n == 0 {
            return;
        }
        for v in &mut data[cols.clone()] {
            *v *= self.inv_pivot[0];
        }
        for i in 1..n {
            let (head, tail) = data.split_at_mut(i * stride);
            let prev = &head[(i - 1) * stride..];
            let row = &mut tail[..stride];
            let (l, p) = (self.lower[i], self.inv_pivot[i]);
            for k in cols.clone() {
                row[k] = (row[k] - l * prev[k]) * p;
            }
        }
        for i in (0..n - 1).rev() {
            let (head, tail) = data.split_at_mut((i + 1) * stride);
            let row = &mut head[i * stride..];
            let next = &tail[..stride];
            let c = self.upper[i];
            for k in cols.clone() {
                row[k] -= c * next[k];
            }
        }
    }
}

/// Factors of a cyclic tridiagonal matrix with constant bands: `sub` below the
/// diagonal and in the top-right corner, `sup` above the diagonal and in the
/// bottom-left corner. Solved by the Sherman-Morrison correction of a Thomas solve.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicFactor {
    inner: ThomasFactor,
    correction: Vec<f64>,
    corner: f64,
    gamma: f64,
    denom: f64,
}

impl CyclicFactor {
    pub fn new(sub: f64, diag: f64, sup: f64, n: usize) -> Result<Self> {
        assert!(n >= 3, "cyclic systems need at least three unknowns");
        let gamma = -diag;
        // alpha = A[n-1][0] = sup, beta = A[0][n-1] = sub
        let mut d = vec![diag; n];
        d[0] = diag - gamma;
        d[n - 1] = diag - sup * sub / gamma;
        let inner = ThomasFactor::new(&vec![sub; n], &d, &vec![sup; n])?;
        let mut z = vec![0.0; n];
        z[0] = gamma;
        z[n - 1] = sup;
        inner.solve_in_place(&mut z);
        let denom = 1.0 + z[0] + sub * z[n - 1] / gamma;
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::ZeroPivot { line: 0 });
        }
        Ok(Self {
            inner,
            correction: z,
            corner: sub,
            gamma,
            denom,
        })
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn solve_in_place(&self, d: &mut [f64]) {
        let n = self.len();
        self.inner.solve_in_place(d);
        let fact = (d[0] + self.corner * d[n - 1] / self.gamma) / self.denom;
        for (v, z) in d.iter_mut().zip(&self.correction) {
            *v -= fact * z;
        }
    }
}
