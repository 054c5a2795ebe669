//! Uniform grids, grid functions and the three stencil operators of the
//! semidiscrete system `U' = (A0 + A1 + A2) U`.
//!
//! Storage is row-major with the x index outermost: `values[j * ny + k]` holds the
//! value at `(x_j, y_k)`. Boundary nodes are stored alongside interior nodes and are
//! never written by the operators, which act on interior nodes only.

use std::io::Write;
use std::path::Path;

use crate::error::{invalid, Error, Result};
use crate::model::{BSParams, ModelParams};

/// Uniform tensor grid including its boundary nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub h1: f64,
    pub h2: f64,
    /// Number of nodes along x, boundary included.
    pub nx: usize,
    /// Number of nodes along y, boundary included.
    pub ny: usize,
}

fn node_count(min: f64, max: f64, h: f64, axis: &str) -> Result<usize> {
    if !(max > min) || !(h > 0.0) || !h.is_finite() {
        return invalid(format!("bad {axis}-range [{min}, {max}] or mesh width {h}"));
    }
    let cells = (max - min) / h;
    let rounded = cells.round();
    if (cells - rounded).abs() > 1e-12 * cells.max(1.0) {
        return invalid(format!(
            "{axis}-range [{min}, {max}] is not divisible by mesh width {h} ({cells} cells)"
        ));
    }
    if rounded < 2.0 {
        return invalid(format!("{axis}-range needs at least one interior node"));
    }
    Ok(rounded as usize + 1)
}

impl Grid2D {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64, h1: f64, h2: f64) -> Result<Self> {
        let nx = node_count(xmin, xmax, h1, "x")?;
        let ny = node_count(ymin, ymax, h2, "y")?;
        Ok(Self {
            xmin,
            xmax,
            ymin,
            ymax,
            h1,
            h2,
            nx,
            ny,
        })
    }

    /// Square domain `[min, max]^2` with `h2 = c * h1`.
    pub fn build(bounds: (f64, f64), h1: f64, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return invalid(format!("mesh ratio must be positive, got {c}"));
        }
        Self::new(bounds.0, bounds.1, bounds.0, bounds.1, h1, c * h1)
    }

    /// Every lattice point `(j h1, k h2)` of `[min, max]^2` is an unknown; the homogeneous
    /// Dirichlet values sit on the ring one node outside.
    pub fn truncated(bounds: (f64, f64), h1: f64, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return invalid(format!("mesh ratio must be positive, got {c}"));
        }
        let h2 = c * h1;
        let g = Self::new(bounds.0 - h1, bounds.1 + h1, bounds.0 - h2, bounds.1 + h2, h1, h2)?;
        // Snap the ring to whole multiples of the mesh width so that x(j) hits the origin exactly.
        let snap = |v: f64, h: f64| (v / h).round() * h;
        Ok(Self {
            xmin: snap(g.xmin, h1),
            xmax: snap(g.xmax, h1),
            ymin: snap(g.ymin, h2),
            ymax: snap(g.ymax, h2),
            ..g
        })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn x(&self, j: usize) -> f64 {
        self.xmin + j as f64 * self.h1
    }

    #[inline]
    pub fn y(&self, k: usize) -> f64 {
        self.ymin + k as f64 * self.h2
    }

    #[inline]
    pub fn index(&self, j: usize, k: usize) -> usize {
        j * self.ny + k
    }

    pub fn is_interior(&self, j: usize, k: usize) -> bool {
        j > 0 && k > 0 && j + 1 < self.nx && k + 1 < self.ny
    }

    /// Mesh ratio `h2 / h1`.
    pub fn ratio(&self) -> f64 {
        self.h2 / self.h1
    }

    /// Node indices of `(x, y)` if that point lies on the grid.
    pub fn node_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let on_axis = |v: f64, min: f64, h: f64, n: usize| {
            let s = (v - min) / h;
            let r = s.round();
            ((s - r).abs() <= 1e-9 && r >= 0.0 && (r as usize) < n).then_some(r as usize)
        };
        Some((
            on_axis(x, self.xmin, self.h1, self.nx)?,
            on_axis(y, self.ymin, self.h2, self.ny)?,
        ))
    }
}

/// Square grid `[min, max]^2` with `h2 = c h1`; see [`Grid2D::build`].
pub fn build_grid(bounds: (f64, f64), h1: f64, c: f64) -> Result<Grid2D> {
    Grid2D::build(bounds, h1, c)
}

/// Real grid function.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub grid: Grid2D,
    pub values: Vec<f64>,
}

impl GridField {
    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid2D, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.nx {
            let x = grid.x(j);
            for k in 0..grid.ny {
                values.push(f(x, grid.y(k)));
            }
        }
        Self { grid, values }
    }

    pub fn from_values(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid.nx,
                grid.ny
            )));
        }
        Ok(Self { grid, values })
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.values[self.grid.index(j, k)]
    }

    #[inline]
    pub fn set(&mut self, j: usize, k: usize, v: f64) {
        let i = self.grid.index(j, k);
        self.values[i] = v;
    }

    /// Discrete mass `h1 h2 sum U`.
    pub fn mass(&self) -> f64 {
        self.grid.h1 * self.grid.h2 * self.values.iter().sum::<f64>()
    }

    /// Largest `|self - other|` over interior nodes with its location.
    pub fn max_abs_diff_interior(&self, other: &GridField) -> Result<(f64, usize, usize)> {
        self.check_grid(&other.grid)?;
        let g = self.grid;
        let mut best = (0.0, 0, 0);
        for j in 1..g.nx - 1 {
            for k in 1..g.ny - 1 {
                let d = (self.get(j, k) - other.get(j, k)).abs();
                if d > best.0 {
                    best = (d, j, k);
                }
            }
        }
        Ok(best)
    }

    pub fn check_grid(&self, grid: &Grid2D) -> Result<()> {
        if &self.grid != grid || self.values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "field on {}x{} grid used with {}x{} grid",
                self.grid.nx, self.grid.ny, grid.nx, grid.ny
            )));
        }
        Ok(())
    }

    /// CSV with header `x,y,value`, one row per node, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,y,value")?;
        for j in 0..self.grid.nx {
            for k in 0..self.grid.ny {
                writeln!(
                    w,
                    "{:.16e},{:.16e},{:.16e}",
                    self.grid.x(j),
                    self.grid.y(k),
                    self.get(j, k)
                )?;
            }
        }
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

/// Three-point coefficients of a one-dimensional operator, indexed by the node
/// along its own direction. Entries at boundary nodes are unused.
#[derive(Debug, Clone, PartialEq)]
pub struct LineStencil {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LineStencil {
    fn from_fn(n: usize, f: impl Fn(usize) -> (f64, f64, f64)) -> Self {
        let mut s = Self {
            lower: vec![0.0; n],
            diag: vec![0.0; n],
            upper: vec![0.0; n],
        };
        for i in 1..n - 1 {
            let (l, d, u) = f(i);
            s.lower[i] = l;
            s.diag[i] = d;
            s.upper[i] = u;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }
}

/// Which part of the split operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// The mixed-derivative part `A0`.
    Mixed,
    /// `A1`, acting along x.
    X,
    /// `A2`, acting along y.
    Y,
}

/// The operators `A0`, `A1`, `A2` on a fixed grid.
///
/// `A1` and `A2` are three-point line stencils whose coefficients may vary along their
/// own direction. `A0` is the four-point cross stencil
/// `w_jk (U[j+1,k+1] + U[j-1,k-1] - U[j+1,k-1] - U[j-1,k+1])` with a separable weight
/// `w_jk = cross_scale * cross_x[j] * cross_y[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilOperators {
    pub grid: Grid2D,
    pub a1: LineStencil,
    pub a2: LineStencil,
    pub cross_scale: f64,
    pub cross_x: Vec<f64>,
    pub cross_y: Vec<f64>,
}

fn convection_diffusion_line(n: usize, h: f64, diffusion: impl Fn(usize) -> f64, drift: impl Fn(usize) -> f64, reaction: f64) -> LineStencil {
    LineStencil::from_fn(n, |i| {
        let d = diffusion(i) / (h * h);
        let a = drift(i) / (2.0 * h);
        (d - a, -2.0 * d + reaction, d + a)
    })
}

impl StencilOperators {
    /// Central differences for `u_xx + 2 rho u_xy + u_yy + a1 u_x + a2 u_y`.
    pub fn model(grid: Grid2D, p: &ModelParams) -> Self {
        Self {
            grid,
            a1: convection_diffusion_line(grid.nx, grid.h1, |_| 1.0, |_| p.a1, 0.0),
            a2: convection_diffusion_line(grid.ny, grid.h2, |_| 1.0, |_| p.a2, 0.0),
            cross_scale: p.rho / (2.0 * grid.h1 * grid.h2),
            cross_x: vec![1.0; grid.nx],
            cross_y: vec![1.0; grid.ny],
        }
    }

    /// Central differences in price coordinates for
    /// `1/2 s1^2 sigma1^2 u_11 + rho sigma1 sigma2 s1 s2 u_12 + 1/2 s2^2 sigma2^2 u_22
    ///  + mu1 s1 u_1 + mu2 s2 u_2 + q u`; the reaction `q` is shared equally between
    /// `A1` and `A2`.
    pub fn black_scholes(grid: Grid2D, bs: &BSParams, mu1: f64, mu2: f64, q: f64) -> Self {
        let s1 = |j: usize| grid.x(j);
        let s2 = |k: usize| grid.y(k);
        Self {
            grid,
            a1: convection_diffusion_line(
                grid.nx,
                grid.h1,
                |j| 0.5 * bs.sigma1 * bs.sigma1 * s1(j) * s1(j),
                |j| mu1 * s1(j),
                0.5 * q,
            ),
            a2: convection_diffusion_line(
                grid.ny,
                grid.h2,
                |k| 0.5 * bs.sigma2 * bs.sigma2 * s2(k) * s2(k),
                |k| mu2 * s2(k),
                0.5 * q,
            ),
            cross_scale: bs.rho * bs.sigma1 * bs.sigma2 / (4.0 * grid.h1 * grid.h2),
            cross_x: (0..grid.nx).map(s1).collect(),
            cross_y: (0..grid.ny).map(s2).collect(),
        }
    }

    /// `out += s * A0 u` on interior nodes.
    pub fn add_a0(&self, u: &[f64], s: f64, out: &mut [f64]) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let cs = s * self.cross_scale;
        if cs == 0.0 {
            return;
        }
        for j in 1..nx - 1 {
            let wj = cs * self.cross_x[j];
            let up = &u[(j + 1) * ny..(j + 2) * ny];
            let dn = &u[(j - 1) * ny..j * ny];
            let row = &mut out[j * ny..(j + 1) * ny];
            for k in 1..ny - 1 {
                row[k] += wj * self.cross_y[k] * ((up[k + 1] - up[k - 1]) - (dn[k + 1] - dn[k - 1]));
            }
        }
    }

    /// `out += s * A1 u` on interior nodes.
    pub fn add_a1(&self, u: &[f64], s: f64, out: &mut [f64]) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        for j in 1..nx - 1 {
            let (l, d, r) = (
                s * self.a1.lower[j],
                s * self.a1.diag[j],
                s * self.a1.upper[j],
            );
            let up = &u[(j + 1) * ny..(j + 2) * ny];
            let mid = &u[j * ny..(j + 1) * ny];
            let dn = &u[(j - 1) * ny..j * ny];
            let row = &mut out[j * ny..(j + 1) * ny];
            for k in 1..ny - 1 {
                row[k] += l * dn[k] + d * mid[k] + r * up[k];
            }
        }
    }

    /// `out += s * A2 u` on interior nodes.
    pub fn add_a2(&self, u: &[f64], s: f64, out: &mut [f64]) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let a2 = &self.a2;
        for j in 1..nx - 1 {
            let line = &u[j * ny..(j + 1) * ny];
            let row = &mut out[j * ny..(j + 1) * ny];
            for k in 1..ny - 1 {
                row[k] += s * (a2.lower[k] * line[k - 1] + a2.diag[k] * line[k] + a2.upper[k] * line[k + 1]);
            }
        }
    }

    /// The interior stencil weights, if they do not vary over the grid.
    pub fn constant_stencil(&self) -> Option<crate::timestepper::ConstantStencil> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let uniform = |v: &[f64]| v.windows(2).all(|w| w[0] == w[1]);
        let line = |l: &LineStencil, n: usize| {
            let r = 1..n - 1;
            (uniform(&l.lower[r.clone()]) && uniform(&l.diag[r.clone()]) && uniform(&l.upper[r]))
                .then(|| (l.lower[1], l.diag[1], l.upper[1]))
        };
        if !uniform(&self.cross_x[1..nx - 1]) || !uniform(&self.cross_y[1..ny - 1]) {
            return None;
        }
        Some(crate::timestepper::ConstantStencil {
            x: line(&self.a1, nx)?,
            y: line(&self.a2, ny)?,
            cross: self.cross_scale * self.cross_x[1] * self.cross_y[1],
        })
    }

    pub fn add_part(&self, part: Direction, u: &[f64], s: f64, out: &mut [f64]) {
        match part {
            Direction::Mixed => self.add_a0(u, s, out),
            Direction::X => self.add_a1(u, s, out),
            Direction::Y => self.add_a2(u, s, out),
        }
    }

    /// `out += s * (A0 + A1 + A2) u` on interior nodes.
    pub fn add_full(&self, u: &[f64], s: f64, out: &mut [f64]) {
        self.add_a0(u, s, out);
        self.add_a1(u, s, out);
        self.add_a2(u, s, out);
    }

    fn apply_with(&self, field: &GridField, f: impl Fn(&Self, &[f64], &mut [f64])) -> Result<GridField> {
        field.check_grid(&self.grid)?;
        let mut out = GridField::zeros(self.grid);
        f(self, &field.values, &mut out.values);
        Ok(out)
    }

    /// `A0 U` with zero on boundary nodes.
    pub fn apply_a0(&self, field: &GridField) -> Result<GridField> {
        self.apply_with(field, |op, u, out| op.add_a0(u, 1.0, out))
    }

    pub fn apply_a1(&self, field: &GridField) -> Result<GridField> {
        self.apply_with(field, |op, u, out| op.add_a1(u, 1.0, out))
    }

    pub fn apply_a2(&self, field: &GridField) -> Result<GridField> {
        self.apply_with(field, |op, u, out| op.add_a2(u, 1.0, out))
    }

    pub fn apply(&self, field: &GridField) -> Result<GridField> {
        self.apply_with(field, |op, u, out| op.add_full(u, 1.0, out))
    }
}

/// Discrete Dirac delta at the origin: `1/(h1 h2)` there and zero elsewhere.
pub fn dirac_initial(grid: Grid2D) -> Result<GridField> {
    point_mass(grid, 0.0, 0.0)
}

fn point_mass(grid: Grid2D, x: f64, y: f64) -> Result<GridField> {
    let (j, k) = grid
        .node_of(x, y)
        .ok_or_else(|| Error::InvalidParameter(format!("point ({x}, {y}) is not a grid node")))?;
    let mut f = GridField::zeros(grid);
    f.set(j, k, 1.0 / (grid.h1 * grid.h2));
    Ok(f)
}

/// Cash-or-nothing payoff `1{s1 >= K1} 1{s2 >= K2}` on a grid in price coordinates.
pub fn cash_or_nothing_initial(grid: Grid2D, bs: &BSParams) -> GridField {
    // Nodes within rounding distance of a strike count as at-the-money.
    let tol1 = 1e-9 * grid.h1;
    let tol2 = 1e-9 * grid.h2;
    GridField::from_fn(grid, |s1, s2| {
        if s1 >= bs.strike1 - tol1 && s2 >= bs.strike2 - tol2 {
            1.0
        } else {
            0.0
        }
    })
}

/// Discrete `delta(s1 - K1) delta(s2 - K2)`, the initial cross gamma of the digital payoff.
pub fn cross_gamma_dirac_initial(grid: Grid2D, bs: &BSParams) -> Result<GridField> {
    point_mass(grid, bs.strike1, bs.strike2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_ops(h: f64) -> StencilOperators {
        let grid = Grid2D::build((-2.0, 2.0), h, 1.0).unwrap();
        StencilOperators::model(grid, &ModelParams::reference())
    }

    fn interior_max(f: &GridField, g: impl Fn(f64, f64) -> f64) -> f64 {
        let mut m: f64 = 0.0;
        for j in 1..f.grid.nx - 1 {
            for k in 1..f.grid.ny - 1 {
                m = m.max((f.get(j, k) - g(f.grid.x(j), f.grid.y(k))).abs());
            }
        }
        m
    }

    #[test]
    fn grid_counts() {
        let g = Grid2D::build((-10.0, 10.0), 0.25, 1.0).unwrap();
        assert_eq!((g.nx, g.ny), (81, 81));
        assert_eq!(g.h2, g.h1);
        assert_eq!(g.node_of(0.0, 0.0), Some((40, 40)));
        assert!(Grid2D::build((-10.0, 10.0), 0.3, 1.0).is_err());
        assert!(Grid2D::build((-10.0, 10.0), 1.0 / 3.0, 1.0).is_ok());
        let g = Grid2D::build((-10.0, 10.0), 0.25, 2.0).unwrap();
        assert_eq!((g.nx, g.ny), (81, 41));
    }

    #[test]
    fn constants_are_annihilated() {
        let ops = reference_ops(0.25);
        let one = GridField::from_fn(ops.grid, |_, _| 1.0);
        for r in [ops.apply_a0(&one), ops.apply_a1(&one), ops.apply_a2(&one)] {
            assert!(r.unwrap().values.iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn linear_and_bilinear_fields() {
        let ops = reference_ops(0.125);
        let p = ModelParams::reference();
        let fx = GridField::from_fn(ops.grid, |x, _| x);
        assert!(interior_max(&ops.apply_a1(&fx).unwrap(), |_, _| p.a1) < 1e-12);
        assert!(interior_max(&ops.apply_a0(&fx).unwrap(), |_, _| 0.0) < 1e-12);
        assert!(interior_max(&ops.apply_a2(&fx).unwrap(), |_, _| 0.0) < 1e-12);
        let fxy = GridField::from_fn(ops.grid, |x, y| x * y);
        assert!(interior_max(&ops.apply_a0(&fxy).unwrap(), |_, _| 2.0 * p.rho) < 1e-12);
    }

    #[test]
    fn cross_stencil_signs() {
        let ops = reference_ops(0.5);
        let g = ops.grid;
        let (j, k) = g.node_of(0.0, 0.0).unwrap();
        let w = ops.cross_scale;
        for (dj, dk, sign) in [(1i64, 1i64, 1.0), (-1, -1, 1.0), (1, -1, -1.0), (-1, 1, -1.0)] {
            let mut f = GridField::zeros(g);
            f.set((j as i64 + dj) as usize, (k as i64 + dk) as usize, 1.0);
            let r = ops.apply_a0(&f).unwrap();
            assert_eq!(r.get(j, k), sign * w);
        }
    }

    #[test]
    fn second_order_consistency() {
        let p = ModelParams::reference();
        let exact = |x: f64, y: f64| {
            let (s, c) = (x.sin(), y.cos());
            let (cx, sy) = (x.cos(), y.sin());
            -s * c + 2.0 * p.rho * (-cx * sy) - s * c + p.a1 * cx * c + p.a2 * (-s * sy)
        };
        let err = |h: f64| {
            let ops = reference_ops(h);
            let u = GridField::from_fn(ops.grid, |x, y| x.sin() * y.cos());
            interior_max(&ops.apply(&u).unwrap(), exact)
        };
        let ratio = err(0.1) / err(0.05);
        assert!((3.6..=4.4).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn symmetric_without_drift() {
        let grid = Grid2D::build((-1.0, 1.0), 0.25, 1.0).unwrap();
        let ops = StencilOperators::model(grid, &ModelParams::new(0.4, 0.0, 0.0).unwrap());
        let n = grid.len();
        let column = |i: usize| {
            let mut e = GridField::zeros(grid);
            e.values[i] = 1.0;
            ops.apply(&e).unwrap().values
        };
        let interior: Vec<usize> = (0..n)
            .filter(|&i| grid.is_interior(i / grid.ny, i % grid.ny))
            .collect();
        let cols: Vec<Vec<f64>> = (0..n).map(column).collect();
        for &a in &interior {
            for &b in &interior {
                assert!((cols[b][a] - cols[a][b]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dirac_data() {
        let g = Grid2D::build((-1.0, 1.0), 0.1, 1.0).unwrap();
        let f = dirac_initial(g).unwrap();
        let (j, k) = g.node_of(0.0, 0.0).unwrap();
        assert!((f.get(j, k) - 100.0).abs() < 1e-9);
        assert!((f.mass() - 1.0).abs() < 1e-15);
        let off = Grid2D::new(-1.05, 0.95, -1.0, 1.0, 0.2, 0.2).unwrap();
        assert!(dirac_initial(off).is_err());
    }

    #[test]
    fn digital_payoff() {
        let bs = BSParams::default();
        let g = Grid2D::build((0.0, 4.0), 0.02, 1.0).unwrap();
        let f = cash_or_nothing_initial(g, &bs);
        let (j, k) = g.node_of(1.0, 1.0).unwrap();
        assert_eq!(f.get(j, k), 1.0);
        assert_eq!(f.get(j - 1, k), 0.0);
        assert_eq!(f.get(j, k - 1), 0.0);
        assert_eq!(f.get(j - 1, k - 1), 0.0);
        assert_eq!(f.get(g.nx - 1, g.ny - 1), 1.0);
        let d = cross_gamma_dirac_initial(g, &bs).unwrap();
        assert!((d.mass() - 1.0).abs() < 1e-12);
        let bad = BSParams {
            strike1: 1.011,
            ..bs
        };
        assert!(cross_gamma_dirac_initial(g, &bad).is_err());
    }

    #[test]
    fn csv_layout() {
        let g = Grid2D::build((0.0, 1.0), 0.5, 1.0).unwrap();
        let f = GridField::from_fn(g, |x, y| x + 10.0 * y);
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,y,value");
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[2], "0.0000000000000000e0,5.0000000000000000e-1,5.0000000000000000e0");
    }
}
