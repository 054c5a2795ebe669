//! JSON run configuration.
//!
//! Every section is strict: unknown keys are rejected. Sections other than `model`
//! and `scheme` may be omitted and take the reference values.

use std::path::Path;

use serde::Deserialize;

use crate::discretization::Grid2D;
use crate::error::{Error, Result};
use crate::model::{BSParams, ModelParams};
use crate::quadrature::QuadratureSpec;
use crate::timestepper::SchemeParams;

/// Time discretisation settings shared by all mesh widths.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub theta: f64,
    /// `dt / h`
    pub lambda: f64,
    #[serde(default = "one")]
    pub c: f64,
    pub n0: usize,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    /// Values of `1/h`, coarse to fine.
    pub inv_h: Vec<usize>,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self {
            inv_h: vec![8, 16, 32, 64],
        }
    }
}

/// The square `[min, max]^2`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub min: f64,
    pub max: f64,
}

impl Default for DomainConfig {
    fn default() -> Self {
        Self { min: -10.0, max: 10.0 }
    }
}

/// Sampling of the Fourier modulus map.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FourierConfig {
    /// Samples per direction over `[-pi, pi]`.
    pub points: usize,
}

impl Default for FourierConfig {
    fn default() -> Self {
        Self { points: 121 }
    }
}

/// The Black-Scholes demo: market data and the price grid `[0, s_max]^2`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BsConfig {
    pub r: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub rho: f64,
    pub k1: f64,
    pub k2: f64,
    pub t: f64,
    pub s_max: f64,
    /// Nodes per direction, boundary included.
    pub nodes: usize,
    pub steps: usize,
}

impl Default for BsConfig {
    fn default() -> Self {
        let p = BSParams::default();
        Self {
            r: p.r,
            sigma1: p.sigma1,
            sigma2: p.sigma2,
            rho: p.rho,
            k1: p.strike1,
            k2: p.strike2,
            t: p.maturity,
            s_max: 4.0,
            nodes: 201,
            steps: 10,
        }
    }
}

impl BsConfig {
    pub fn params(&self) -> BSParams {
        BSParams {
            r: self.r,
            sigma1: self.sigma1,
            sigma2: self.sigma2,
            rho: self.rho,
            strike1: self.k1,
            strike2: self.k2,
            maturity: self.t,
        }
    }

    /// The price grid, checked to carry both strikes as nodes.
    pub fn grid(&self) -> Result<Grid2D> {
        if self.nodes < 3 {
            return Err(Error::Config(format!("bs.nodes must be at least 3, got {}", self.nodes)));
        }
        if self.steps == 0 {
            return Err(Error::Config("bs.steps must be positive".into()));
        }
        let h = self.s_max / (self.nodes - 1) as f64;
        let grid = Grid2D::new(0.0, self.s_max, 0.0, self.s_max, h, h).map_err(config)?;
        if grid.node_of(self.k1, self.k2).is_none() {
            return Err(Error::Config(format!(
                "strikes ({}, {}) are not grid nodes for s_max = {} and {} nodes",
                self.k1, self.k2, self.s_max, self.nodes
            )));
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelParams,
    pub scheme: SchemeConfig,
    #[serde(default)]
    pub mesh: MeshConfig,
    #[serde(default)]
    pub domain: DomainConfig,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub fourier: FourierConfig,
    #[serde(default)]
    pub bs: BsConfig,
}

fn config(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

impl RunConfig {
    /// Reference parameters: `rho = -0.7, a1 = 2, a2 = 3`, `theta = 1/3`, `lambda = 0.4`,
    /// `n0 = 2` on the default ladder.
    pub fn reference() -> Self {
        Self {
            model: ModelParams::reference(),
            scheme: SchemeConfig {
                theta: 1.0 / 3.0,
                lambda: 0.4,
                c: 1.0,
                n0: 2,
            },
            mesh: MeshConfig::default(),
            domain: DomainConfig::default(),
            quadrature: QuadratureSpec::default(),
            fourier: FourierConfig::default(),
            bs: BsConfig::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Rejects anything that cannot run. An inadmissible `theta` is not an error,
    /// see [`RunConfig::warnings`].
    pub fn validate(&self) -> Result<()> {
        self.model.validate().map_err(config)?;
        self.quadrature.validate().map_err(config)?;
        if self.mesh.inv_h.is_empty() {
            return Err(Error::Config("mesh.inv_h is empty".into()));
        }
        if self.fourier.points < 2 {
            return Err(Error::Config("fourier.points must be at least 2".into()));
        }
        for &inv_h in &self.mesh.inv_h {
            self.scheme_for(inv_h)?;
            self.model_grid(inv_h)?;
        }
        self.bs.params().validate().map_err(config)?;
        self.bs.grid()?;
        Ok(())
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !crate::fourier::theta_admissible(self.scheme.theta, self.model.rho) {
            out.push(format!(
                "theta = {} lies outside theta >= 1/4, theta > (1 + |rho|)/6; stability is not guaranteed",
                self.scheme.theta
            ));
        }
        out
    }

    /// Scheme parameters for mesh width `1 / inv_h`.
    pub fn scheme_for(&self, inv_h: usize) -> Result<SchemeParams> {
        if inv_h == 0 {
            return Err(Error::Config("mesh.inv_h entries must be positive".into()));
        }
        let s = &self.scheme;
        SchemeParams::new(s.theta, s.lambda, s.c, s.n0, 1.0 / inv_h as f64).map_err(|e| {
            Error::Config(format!("1/h = {inv_h}: {}", e.to_string().trim_start_matches("invalid parameter: ")))
        })
    }

    /// Model-problem grid: every lattice point of the domain is an unknown, with the
    /// zero Dirichlet ring one node outside.
    pub fn model_grid(&self, inv_h: usize) -> Result<Grid2D> {
        let d = self.domain;
        Grid2D::truncated((d.min, d.max), 1.0 / inv_h as f64, self.scheme.c).map_err(config)
    }

    /// The first ladder entry, used by the single-mesh modes.
    pub fn primary_inv_h(&self) -> usize {
        self.mesh.inv_h[0]
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    RunConfig::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: &str = r#"{
        "model": {"rho": -0.7, "a1": 2.0, "a2": 3.0},
        "scheme": {"theta": 0.3333333333333333, "lambda": 0.4, "c": 1.0, "n0": 2},
        "mesh": {"inv_h": [8, 16, 32, 64]},
        "domain": {"min": -10.0, "max": 10.0},
        "quadrature": {"rel_tol": 1e-8, "radius": 12.0}
    }"#;

    #[test]
    fn parses_reference() {
        let cfg = RunConfig::from_json(REFERENCE).unwrap();
        assert_eq!(cfg.model, ModelParams::reference());
        assert!((cfg.scheme.theta - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(cfg.mesh.inv_h, vec![8, 16, 32, 64]);
        assert_eq!(cfg.bs, BsConfig::default());
        assert!(cfg.warnings().is_empty());
        assert_eq!(cfg.scheme_for(64).unwrap().n_steps, 160);
    }

    #[test]
    fn rejects_fractional_step_count() {
        let text = REFERENCE.replace("\"lambda\": 0.4", "\"lambda\": 0.3").replace("[8, 16, 32, 64]", "[10]");
        let err = RunConfig::from_json(&text).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(err.to_string().contains("nearest valid lambda"), "{err}");
    }

    #[test]
    fn rejects_empty_mesh() {
        let text = REFERENCE.replace("[8, 16, 32, 64]", "[]");
        assert!(RunConfig::from_json(&text).is_err());
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = REFERENCE.replace("\"a2\": 3.0", "\"a2\": 3.0, \"a3\": 1.0");
        assert!(RunConfig::from_json(&text).is_err());
        let text = REFERENCE.replace("\"rel_tol\"", "\"reltol\"");
        assert!(RunConfig::from_json(&text).is_err());
        let text = REFERENCE.replacen('{', "{\"extra\": 1,", 1);
        assert!(RunConfig::from_json(&text).is_err());
    }

    #[test]
    fn inadmissible_theta_only_warns() {
        let text = REFERENCE.replace("0.3333333333333333", "0.2");
        let cfg = RunConfig::from_json(&text).unwrap();
        assert_eq!(cfg.warnings().len(), 1);
    }

    #[test]
    fn bs_strikes_must_be_nodes() {
        let text = REFERENCE.replace("\"domain\"", "\"bs\": {\"s_max\": 3.0}, \"domain\"");
        assert!(RunConfig::from_json(&text).is_err());
        let text = REFERENCE.replace("\"domain\"", "\"bs\": {\"s_max\": 3.0, \"nodes\": 151}, \"domain\"");
        assert_eq!(RunConfig::from_json(&text).unwrap().bs.grid().unwrap().nx, 151);
    }
}
