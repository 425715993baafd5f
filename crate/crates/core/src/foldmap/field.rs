//! Potentials, folded potentials and the paired field on (S^2)^2 minus the
//! diagonal.

use serde::{Deserialize, Serialize};

use super::density::{dot3, MassDensity};
use crate::error::{Error, Result};
use crate::radial::ExtendedProfile;
use crate::sphere::quadrature::chunked_sum_vec;

/// Even weight g, positive on (-1, 1), with odd primitive G(t) = int_0^t g.
pub trait FoldWeight: Sync {
    fn g(&self, t: f64) -> f64;
    fn big_g(&self, t: f64) -> f64;
}

impl FoldWeight for ExtendedProfile {
    fn g(&self, t: f64) -> f64 {
        ExtendedProfile::g(self, t)
    }

    fn big_g(&self, t: f64) -> f64 {
        ExtendedProfile::big_g(self, t)
    }
}

/// g(t) = 1 - t^2.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct PolynomialWeight;

impl FoldWeight for PolynomialWeight {
    fn g(&self, t: f64) -> f64 {
        1.0 - t * t
    }

    fn big_g(&self, t: f64) -> f64 {
        t - t * t * t / 3.0
    }
}

/// F_a v: reflection through a-perp when a.v > 0, identity otherwise.
#[inline]
pub fn fold3(a: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    let s = dot3(a, v);
    if s > 0.0 {
        reflect3(a, v)
    } else {
        v
    }
}

#[inline]
pub fn reflect3(a: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    let s = 2.0 * dot3(a, v);
    [v[0] - s * a[0], v[1] - s * a[1], v[2] - s * a[2]]
}

pub fn geodesic3(z: [f64; 3], w: [f64; 3]) -> f64 {
    let d = [z[0] - w[0], z[1] - w[1], z[2] - w[2]];
    let s = [z[0] + w[0], z[1] + w[1], z[2] + w[2]];
    2.0 * dot3(d, d).sqrt().atan2(dot3(s, s).sqrt())
}

/// E_rho(z) = int rho(v) G(z.v) dv.
pub fn potential(rho: &MassDensity, z: [f64; 3], weight: &dyn FoldWeight) -> f64 {
    rho.nodes.iter().zip(&rho.masses).map(|(v, m)| m * weight.big_g(dot3(z, *v))).sum()
}

/// The folded potential int rho(v) G(z . F_a v) dv.
pub fn folded_potential(rho: &MassDensity, a: [f64; 3], z: [f64; 3], weight: &dyn FoldWeight) -> f64 {
    rho.nodes.iter().zip(&rho.masses).map(|(v, m)| m * weight.big_g(dot3(z, fold3(a, *v)))).sum()
}

/// Tangent gradient in z of the folded potential,
/// int rho(v) g(z . F_a v) pi_z(F_a v) dv.
pub fn grad_folded(rho: &MassDensity, a: [f64; 3], z: [f64; 3], weight: &dyn FoldWeight) -> [f64; 3] {
    // Accumulates sum m g F_a v and sum m g (z . F_a v); the projection is
    // applied once at the end.
    let acc = chunked_sum_vec(rho.len(), 4, |i, acc| {
        let x = fold3(a, rho.nodes[i]);
        let t = dot3(z, x);
        let c = rho.masses[i] * weight.g(t);
        acc[0] += c * x[0];
        acc[1] += c * x[1];
        acc[2] += c * x[2];
        acc[3] += c * t;
    });
    [acc[0] - acc[3] * z[0], acc[1] - acc[3] * z[1], acc[2] - acc[3] * z[2]]
}

/// Unfolded gradient of E_rho at z.
pub fn grad_potential(rho: &MassDensity, z: [f64; 3], weight: &dyn FoldWeight) -> [f64; 3] {
    let acc = chunked_sum_vec(rho.len(), 4, |i, acc| {
        let x = rho.nodes[i];
        let t = dot3(z, x);
        let c = rho.masses[i] * weight.g(t);
        acc[0] += c * x[0];
        acc[1] += c * x[1];
        acc[2] += c * x[2];
        acc[3] += c * t;
    });
    [acc[0] - acc[3] * z[0], acc[1] - acc[3] * z[1], acc[2] - acc[3] * z[2]]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairField {
    /// (w - z)/|w - z|.
    pub a: [f64; 3],
    /// Gradient of the folded rho-potential, tangent at z.
    pub first: [f64; 3],
    /// R_a applied to the gradient of the folded sigma-potential, tangent at w.
    pub second: [f64; 3],
    /// |first| and |second| (R_a is an isometry).
    pub residual_rho: f64,
    pub residual_sigma: f64,
}

pub fn fold_axis(z: [f64; 3], w: [f64; 3]) -> [f64; 3] {
    let d = [w[0] - z[0], w[1] - z[1], w[2] - z[2]];
    let n = dot3(d, d).sqrt();
    [d[0] / n, d[1] / n, d[2] / n]
}

/// The paired field at (z, w); `delta` is the geodesic width of the excluded
/// neighbourhood of the diagonal.
pub fn pair_field(rho: &MassDensity, sigma: &MassDensity, z: [f64; 3], w: [f64; 3], weight: &dyn FoldWeight, delta: f64) -> Result<PairField> {
    let d = geodesic3(z, w);
    if d < delta {
        return Err(Error::NearDiagonal { distance: d, margin: delta });
    }
    let a = fold_axis(z, w);
    let first = grad_folded(rho, a, z, weight);
    let second = reflect3(a, grad_folded(sigma, a, z, weight));
    Ok(PairField { a, first, second, residual_rho: dot3(first, first).sqrt(), residual_sigma: dot3(second, second).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foldmap::density::normalize3;

    #[test]
    fn polynomial_primitive() {
        let g = PolynomialWeight;
        let h = 1e-6;
        for t in [-0.9, -0.2, 0.0, 0.4, 0.95] {
            let fd = (g.big_g(t + h) - g.big_g(t - h)) / (2.0 * h);
            assert!((fd - g.g(t)).abs() < 1e-9);
            assert_eq!(g.big_g(-t), -g.big_g(t));
        }
    }

    #[test]
    fn fold_lands_in_closed_negative_hemisphere() {
        let a = normalize3([0.2, -0.7, 0.4]);
        for v in [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], normalize3([0.3, 0.3, 0.9])] {
            let f = fold3(a, v);
            assert!(dot3(a, f) <= 1e-15);
            assert!((dot3(f, f) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn geodesic_distance() {
        assert!((geodesic3([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((geodesic3([0.0, 0.0, 1.0], [0.0, 0.0, -1.0]) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn near_diagonal_is_rejected() {
        let rho = MassDensity::cap_indicator([0.0, 0.0, 1.0], 0.5, 8, 16).unwrap();
        let z = [0.0, 0.0, 1.0];
        let w = normalize3([0.01, 0.0, 1.0]);
        assert!(matches!(pair_field(&rho, &rho, z, w, &PolynomialWeight, 0.05), Err(Error::NearDiagonal { .. })));
    }
}
