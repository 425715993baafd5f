//! Test functions built from a fold pair and the choice of their directions.

use serde::{Deserialize, Serialize};

use super::density::{cross3, dot3, frame3, MassDensity};
use super::field::{fold3, grad_folded, FoldWeight};
use super::finder::FoldCritPair;
use crate::error::{Error, Result};
use crate::fem::{Assembly, SphMesh};

/// phi_xi(v) = g(z . F_a v) (xi . F_a v) with xi tangent at z. In coordinates
/// where z is the north pole this is the usual g((F_a v)_3)(xi . F_a v).
#[derive(Clone, Copy)]
pub struct TestFunction<'a> {
    pub xi: [f64; 3],
    pub pair: FoldCritPair,
    pub weight: &'a dyn FoldWeight,
}

impl<'a> TestFunction<'a> {
    pub fn new(xi: [f64; 3], pair: FoldCritPair, weight: &'a dyn FoldWeight) -> Result<Self> {
        if dot3(xi, pair.z).abs() > 1e-10 || (dot3(xi, xi) - 1.0).abs() > 1e-10 {
            return Err(Error::Domain("xi must be a unit vector tangent at z".into()));
        }
        Ok(Self { xi, pair, weight })
    }

    pub fn eval(&self, v: [f64; 3]) -> f64 {
        let x = fold3(self.pair.a, v);
        self.weight.g(dot3(self.pair.z, x)) * dot3(self.xi, x)
    }

    /// int phi_xi d(rho) with the density's own quadrature.
    pub fn integrate_against(&self, rho: &MassDensity) -> f64 {
        rho.integrate(|v| self.eval(v))
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SelectedBasis {
    /// xi_1, xi_2: orthonormal, tangent at z, with (xi_1, xi_2, z) positively
    /// oriented. phi_{xi_2} is orthogonal to u_2.
    pub xi: [[f64; 3]; 2],
    /// max |f| over the sampled half circle.
    pub f_max: f64,
    /// f vanished on every sample; the canonical frame was returned.
    pub degenerate: bool,
}

pub const BASIS_SAMPLES: usize = 1024;

/// Picks xi_2 on the unit circle of T_z as a zero of the odd map
/// f(xi) = int u_2 phi_xi rho, located by a sign change on a sampled half
/// circle and refined by bisection. `u2_rho` is the density u_2 rho.
pub fn select_basis(u2_rho: &MassDensity, pair: &FoldCritPair, weight: &dyn FoldWeight, tol: f64) -> Result<SelectedBasis> {
    let frame = frame3(pair.z);
    // f is linear in xi, so f(xi) = xi . c with c the folded gradient.
    let c = grad_folded(u2_rho, pair.a, pair.z, weight);
    let (c0, c1) = (dot3(c, frame[0]), dot3(c, frame[1]));
    let f = |theta: f64| c0 * theta.cos() + c1 * theta.sin();
    let xi_at = |theta: f64| [0, 1, 2].map(|k| theta.cos() * frame[0][k] + theta.sin() * frame[1][k]);

    let samples: Vec<f64> = (0..=BASIS_SAMPLES).map(|i| f(std::f64::consts::PI * i as f64 / BASIS_SAMPLES as f64)).collect();
    let f_max = samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if f_max <= tol {
        return Ok(SelectedBasis { xi: frame, f_max, degenerate: true });
    }
    let step = std::f64::consts::PI / BASIS_SAMPLES as f64;
    let k = (0..BASIS_SAMPLES)
        .find(|&i| samples[i] == 0.0 || samples[i].signum() != samples[i + 1].signum())
        .ok_or_else(|| Error::Check("no sign change of the basis map on the half circle".into()))?;
    let (mut lo, mut hi) = (k as f64 * step, (k + 1) as f64 * step);
    if samples[k] == 0.0 {
        hi = lo;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == f(lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let xi2 = xi_at(0.5 * (lo + hi));
    let xi1 = cross3(xi2, pair.z);
    Ok(SelectedBasis { xi: [xi1, xi2], f_max, degenerate: false })
}

/// Vertex values of phi on the mesh.
pub fn interpolate(phi: &TestFunction, mesh: &SphMesh) -> Vec<f64> {
    mesh.vertices.iter().map(|v| phi.eval(*v)).collect()
}

/// Numerator and denominator of the Rayleigh quotient of the P1 interpolant
/// of phi with the assembled (weighted) matrices.
pub fn rayleigh_parts(phi: &TestFunction, mesh: &SphMesh, asm: &Assembly) -> (f64, f64) {
    let x = asm.from_vertices(&interpolate(phi, mesh));
    (asm.stiffness.quadratic_form(&x), asm.mass.quadratic_form(&x))
}

/// int rho |grad phi|^2 / int rho phi^2.
pub fn rayleigh_of_test(phi: &TestFunction, mesh: &SphMesh, asm: &Assembly) -> Result<f64> {
    let (num, den) = rayleigh_parts(phi, mesh, asm);
    if den <= 1e-14 * asm.total_mass * phi.weight.g(1.0).abs().max(1e-300).powi(2) || den <= 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(num / den)
}

/// Ratio of the summed numerators to the summed denominators over a family
/// of test functions.
pub fn rayleigh_of_family(phis: &[TestFunction], mesh: &SphMesh, asm: &Assembly) -> Result<f64> {
    let (num, den) = phis.iter().map(|p| rayleigh_parts(p, mesh, asm)).fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    if den <= 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(num / den)
}
