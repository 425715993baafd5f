//! Named numerical tolerances shared by the solvers and the verification harness.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::Result;

/// Every tolerance in one record. Loadable from JSON so the CLI can override
/// any subset (`--tol-file`); missing fields keep their defaults.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct Tolerances {
    /// Unit-norm tolerance for points of the sphere.
    pub unit_norm: f64,
    /// |z + w| below this makes the midpoint undefined.
    pub antipodal: f64,
    /// Nodes with |a.v| below this take the identity branch of the fold.
    pub fold_node: f64,
    /// Root tolerance of the shooting miss function (in mu).
    pub shooting_mu: f64,
    /// Relative accuracy requested from the adaptive ODE integrator.
    pub ode_rtol: f64,
    /// Absolute accuracy requested from the adaptive ODE integrator.
    pub ode_atol: f64,
    /// Maximum allowed ODE residual of a sampled profile.
    pub ode_residual: f64,
    /// Slack allowed when checking the monotonicity of J^2 and b.
    pub monotonicity_slack: f64,
    /// FEM eigenpair residual relative to |M u|.
    pub fem_residual: f64,
    /// Maximum subspace iterations of the FEM eigensolver.
    pub fem_max_iter: usize,
    /// Tubular margin around the diagonal of the pair manifold.
    pub diagonal_margin: f64,
    /// Target residual of the critical pair finder.
    pub pair_residual: f64,
    /// Geodesic deduplication radius in the zero census.
    pub census_dedup: f64,
    /// Jacobian condition numbers above this mark a zero as degenerate.
    pub census_condition: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unit_norm: 1e-12,
            antipodal: 1e-10,
            fold_node: 0.0,
            shooting_mu: 1e-10,
            ode_rtol: 1e-12,
            ode_atol: 1e-14,
            ode_residual: 1e-8,
            monotonicity_slack: 1e-10,
            fem_residual: 1e-8,
            fem_max_iter: 2000,
            diagonal_margin: 0.05,
            pair_residual: 1e-8,
            census_dedup: 1e-4,
            census_condition: 1e6,
        }
    }
}

impl Tolerances {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}
