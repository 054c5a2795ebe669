//! Model-problem stencils on an `m x m` periodic grid.
//!
//! On a periodic grid every lattice Fourier mode `exp(i (theta1 j + theta2 k))` with
//! `theta = 2 pi l / m` is an eigenvector of the constant-coefficient operators, so the
//! stepper applied to a mode must reproduce the amplification factor exactly. Only
//! used to test the stepper against the Fourier symbols.

use std::f64::consts::PI;

use super::{ConstantStencil, CyclicFactor, SpectralInverse, SplitOperator};
use crate::discretization::Direction;
use crate::error::{invalid, Result};
use crate::model::ModelParams;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOperators {
    pub m: usize,
    pub h1: f64,
    pub h2: f64,
    /// (lower, diag, upper) of `A1`
    x: (f64, f64, f64),
    y: (f64, f64, f64),
    cross: f64,
}

#[derive(Debug, Clone)]
pub struct PeriodicFactor {
    part: Direction,
    cyclic: CyclicFactor,
}

impl PeriodicOperators {
    pub fn new(m: usize, h1: f64, h2: f64, p: &ModelParams) -> Result<Self> {
        if m < 3 {
            return invalid(format!("periodic grid needs at least 3 nodes per direction, got {m}"));
        }
        let line = |h: f64, a: f64| {
            let d = 1.0 / (h * h);
            let c = a / (2.0 * h);
            (d - c, -2.0 * d, d + c)
        };
        Ok(Self {
            m,
            h1,
            h2,
            x: line(h1, p.a1),
            y: line(h2, p.a2),
            cross: p.rho / (2.0 * h1 * h2),
        })
    }

    /// Lattice angle `2 pi l / m` mapped into `(-pi, pi]`.
    pub fn angle(&self, l: usize) -> f64 {
        let m = self.m as f64;
        let t = 2.0 * PI * l as f64 / m;
        if t > PI {
            t - 2.0 * PI
        } else {
            t
        }
    }

    /// Real and imaginary parts of the mode `exp(i (theta1 j + theta2 k))`.
    pub fn mode(&self, l1: usize, l2: usize) -> (Vec<f64>, Vec<f64>) {
        let m = self.m;
        let mut re = Vec::with_capacity(m * m);
        let mut im = Vec::with_capacity(m * m);
        for j in 0..m {
            for k in 0..m {
                // Reduce the phase exactly on the lattice before taking trigonometric values.
                let phase = ((l1 * j + l2 * k) % m) as f64 * 2.0 * PI / m as f64;
                re.push(phase.cos());
                im.push(phase.sin());
            }
        }
        (re, im)
    }
}

impl SplitOperator for PeriodicOperators {
    type Factor = PeriodicFactor;

    fn len(&self) -> usize {
        self.m * self.m
    }

    fn add_part(&self, part: Direction, u: &[f64], s: f64, out: &mut [f64]) {
        let m = self.m;
        let prev: Vec<usize> = (0..m).map(|i| (i + m - 1) % m).collect();
        let next: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        match part {
            Direction::Mixed => {
                let w = s * self.cross;
                for j in 0..m {
                    let (jp, jm) = (next[j], prev[j]);
                    for k in 0..m {
                        let (kp, km) = (next[k], prev[k]);
                        out[j * m + k] +=
                            w * (u[jp * m + kp] + u[jm * m + km] - u[jp * m + km] - u[jm * m + kp]);
                    }
                }
            }
            Direction::X => {
                let (l, d, r) = self.x;
                for j in 0..m {
                    let (jp, jm) = (next[j], prev[j]);
                    for k in 0..m {
                        out[j * m + k] += s * (l * u[jm * m + k] + d * u[j * m + k] + r * u[jp * m + k]);
                    }
                }
            }
            Direction::Y => {
                let (l, d, r) = self.y;
                for j in 0..m {
                    for k in 0..m {
                        out[j * m + k] +=
                            s * (l * u[j * m + prev[k]] + d * u[j * m + k] + r * u[j * m + next[k]]);
                    }
                }
            }
        }
    }

    fn factor(&self, part: Direction, s: f64) -> Result<PeriodicFactor> {
        let (l, d, r) = match part {
            Direction::X => self.x,
            Direction::Y => self.y,
            Direction::Mixed => return invalid("the mixed-derivative part has no line factorisation"),
        };
        Ok(PeriodicFactor {
            part,
            cyclic: CyclicFactor::new(-s * l, 1.0 - s * d, -s * r, self.m)?,
        })
    }

    fn spectral_inverse(&self, s: f64) -> Result<Option<SpectralInverse>> {
        let stencil = ConstantStencil {
            x: self.x,
            y: self.y,
            cross: self.cross,
        };
        let m = self.m;
        SpectralInverse::new(stencil, s, (m, m), 0, (m, m)).map(Some)
    }

    fn solve(&self, factor: &PeriodicFactor, x: &mut [f64]) {
        let m = self.m;
        match factor.part {
            Direction::X => {
                let mut line = vec![0.0; m];
                for k in 0..m {
                    for j in 0..m {
                        line[j] = x[j * m + k];
                    }
                    factor.cyclic.solve_in_place(&mut line);
                    for j in 0..m {
                        x[j * m + k] = line[j];
                    }
                }
            }
            _ => {
                for j in 0..m {
                    factor.cyclic.solve_in_place(&mut x[j * m..(j + 1) * m]);
                }
            }
        }
    }
}
