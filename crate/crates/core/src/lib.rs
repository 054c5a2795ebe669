//! Modified Craig-Sneyd ADI time stepping for the 2D convection-diffusion model
//! `u_t = u_xx + 2 rho u_xy + u_yy + a1 u_x + a2 u_y` with Dirac initial data, together with
//! the Fourier analysis that predicts its error in the maximum norm.

pub mod config;
pub mod discretization;
pub mod error;
pub mod erroranalysis;
pub mod experiments;
pub mod fourier;
pub mod model;
pub mod quadrature;
pub mod timestepper;

pub use error::{Error, Result};
