//! Densities on S^2 as weighted point sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::{DomainMask, SphMesh};
use crate::sphere::{gauss_legendre, QuadratureRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    CapIndicator,
    MeshEigenfunctionWeighted,
    MeshIndicator,
    Radial,
    Explicit,
}

/// `sum_i m_i f(v_i)` approximates `int rho f`; `m_i` already contains the
/// quadrature weight. Nodes with zero mass are dropped.
#[derive(Debug, Clone)]
pub struct MassDensity {
    pub nodes: Vec<[f64; 3]>,
    pub masses: Vec<f64>,
    pub provenance: Provenance,
}

pub(crate) fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Orthonormal tangent frame at `z`, built from the coordinate axis least
/// aligned with it.
pub(crate) fn frame3(z: [f64; 3]) -> [[f64; 3]; 2] {
    let k = (0..3).min_by(|&i, &j| z[i].abs().total_cmp(&z[j].abs())).unwrap();
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let d = dot3(e, z);
    let e1 = normalize3([e[0] - d * z[0], e[1] - d * z[1], e[2] - d * z[2]]);
    [e1, cross3(z, e1)]
}

impl MassDensity {
    pub fn new(nodes: Vec<[f64; 3]>, masses: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if nodes.len() != masses.len() {
            return Err(Error::Domain("nodes and masses differ in length".into()));
        }
        let (nodes, masses) = nodes.into_iter().zip(masses).filter(|(_, m)| *m != 0.0).unzip();
        Ok(Self { nodes, masses, provenance })
    }

    pub fn zero() -> Self {
        Self { nodes: Vec::new(), masses: Vec::new(), provenance: Provenance::Explicit }
    }

    /// Indicator of the cap of radius `r` about `center`: Gauss-Legendre in
    /// the polar angle over [0, r], uniform in azimuth.
    pub fn cap_indicator(center: [f64; 3], r: f64, n_theta: usize, n_phi: usize) -> Result<Self> {
        if !(r > 0.0 && r < std::f64::consts::PI) {
            return Err(Error::Domain(format!("cap radius {r} outside (0, pi)")));
        }
        let c = normalize3(center);
        let [e1, e2] = frame3(c);
        let (x, w) = gauss_legendre(n_theta);
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let mut masses = Vec::with_capacity(n_theta * n_phi);
        for (xi, wi) in x.iter().zip(&w) {
            let t = 0.5 * r * (xi + 1.0);
            let (s, co) = t.sin_cos();
            for j in 0..n_phi {
                let (sp, cp) = ((j as f64 + 0.5) * dphi).sin_cos();
                nodes.push([
                    co * c[0] + s * (cp * e1[0] + sp * e2[0]),
                    co * c[1] + s * (cp * e1[1] + sp * e2[1]),
                    co * c[2] + s * (cp * e1[2] + sp * e2[2]),
                ]);
                masses.push(0.5 * r * wi * s * dphi);
            }
        }
        Ok(Self { nodes, masses, provenance: Provenance::CapIndicator })
    }

    /// Samples `f` at the nodes of a sphere rule.
    pub fn from_rule(rule: &QuadratureRule, provenance: Provenance, f: impl Fn([f64; 3]) -> f64) -> Result<Self> {
        if rule.dim() != 3 {
            return Err(Error::Domain("fold densities live on S^2".into()));
        }
        let (nodes, masses): (Vec<[f64; 3]>, Vec<f64>) = rule
            .nodes()
            .map(|(x, w)| {
                let v = [x[0], x[1], x[2]];
                (v, w * f(v))
            })
            .unzip();
        Self::new(nodes, masses, provenance)
    }

    /// Integration over the retained flat triangles of a mesh with the
    /// three-point interior rule, nodes projected to the sphere. `values`
    /// are per-vertex and interpolated linearly (1 if absent).
    pub fn from_mesh(mesh: &SphMesh, mask: &DomainMask, values: Option<&[f64]>, provenance: Provenance) -> Result<Self> {
        const BARY: [[f64; 3]; 3] = [[2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0], [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0], [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0]];
        if let Some(v) = values {
            if v.len() != mesh.num_vertices() {
                return Err(Error::Domain("vertex values do not match the mesh".into()));
            }
        }
        let mut nodes = Vec::new();
        let mut masses = Vec::new();
        for t in (0..mesh.num_triangles()).filter(|&t| mask.triangles[t]) {
            let tri = mesh.triangles[t];
            let p = mesh.corners(t);
            let area = mesh.flat_area(t);
            for b in &BARY {
                let x = [0, 1, 2].map(|k| b[0] * p[0][k] + b[1] * p[1][k] + b[2] * p[2][k]);
                let val = values.map_or(1.0, |v| b[0] * v[tri[0]] + b[1] * v[tri[1]] + b[2] * v[tri[2]]);
                nodes.push(normalize3(x));
                masses.push(area / 3.0 * val);
            }
        }
        Self::new(nodes, masses, provenance)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn total_variation(&self) -> f64 {
        self.masses.iter().map(|m| m.abs()).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.masses.iter().all(|m| *m >= 0.0)
    }

    /// Same nodes, masses multiplied by `f` at each node.
    pub fn weighted(&self, provenance: Provenance, f: impl Fn([f64; 3]) -> f64) -> Result<Self> {
        let masses = self.nodes.iter().zip(&self.masses).map(|(v, m)| m * f(*v)).collect();
        Self::new(self.nodes.clone(), masses, provenance)
    }

    /// Same nodes with node-wise multipliers.
    pub fn weighted_by(&self, provenance: Provenance, factors: &[f64]) -> Result<Self> {
        if factors.len() != self.len() {
            return Err(Error::Domain("factor count does not match the nodes".into()));
        }
        let masses = self.masses.iter().zip(factors).map(|(m, f)| m * f).collect();
        Self::new(self.nodes.clone(), masses, provenance)
    }

    /// Disjoint union of the point sets.
    pub fn plus(&self, other: &MassDensity) -> Self {
        let mut nodes = self.nodes.clone();
        nodes.extend_from_slice(&other.nodes);
        let mut masses = self.masses.clone();
        masses.extend_from_slice(&other.masses);
        Self { nodes, masses, provenance: self.provenance }
    }

    pub fn integrate(&self, f: impl Fn([f64; 3]) -> f64) -> f64 {
        self.nodes.iter().zip(&self.masses).map(|(v, m)| m * f(*v)).sum()
    }
}

/// Random polynomial of total degree <= `degree` in the ambient coordinates,
/// coefficients uniform in [-1, 1].
pub fn random_polynomial(rng: &mut impl Rng, degree: usize) -> impl Fn([f64; 3]) -> f64 + Sync {
    let mut terms = Vec::new();
    for i in 0..=degree {
        for j in 0..=degree - i {
            for k in 0..=degree - i - j {
                terms.push(([i as i32, j as i32, k as i32], rng.gen_range(-1.0..1.0)));
            }
        }
    }
    move |v: [f64; 3]| terms.iter().map(|(e, c)| c * v[0].powi(e[0]) * v[1].powi(e[1]) * v[2].powi(e[2])).sum()
}

/// Seeded smooth pair on a product Gauss rule: rho is a random polynomial
/// rescaled into [0.2, 1.2], sigma a signed random polynomial.
pub fn random_smooth_pair(seed: u64, degree: usize, rule: &QuadratureRule) -> Result<(MassDensity, MassDensity)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_polynomial(&mut rng, degree);
    let q = random_polynomial(&mut rng, degree);
    let vals: Vec<f64> = rule.nodes().map(|(x, _)| p([x[0], x[1], x[2]])).collect();
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let rho = MassDensity::from_rule(rule, Provenance::Explicit, |v| 0.2 + (p(v) - lo) / (hi - lo))?;
    let sigma = MassDensity::from_rule(rule, Provenance::Explicit, q)?;
    Ok((rho, sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{build_icosphere, domain_mask, DomainSpec};
    use crate::sphere::cap_area;

    #[test]
    fn cap_rule_mass_and_centroid() {
        let c = normalize3([0.3, -0.5, 0.8]);
        let d = MassDensity::cap_indicator(c, 0.7, 24, 48).unwrap();
        assert!((d.mass() - cap_area(0.7, 2).unwrap()).abs() < 1e-12);
        // First moment is parallel to the center.
        let m = [0, 1, 2].map(|k| d.integrate(|v| v[k]));
        let par = dot3(m, c);
        for k in 0..3 {
            assert!((m[k] - par * c[k]).abs() < 1e-13);
        }
    }

    #[test]
    fn frames_are_orthonormal() {
        for z in [[0.0, 0.0, 1.0], normalize3([1.0, 2.0, -0.5]), [1.0, 0.0, 0.0]] {
            let [e1, e2] = frame3(z);
            assert!(dot3(e1, z).abs() < 1e-15 && dot3(e2, z).abs() < 1e-15 && dot3(e1, e2).abs() < 1e-15);
            assert!((dot3(e1, e1) - 1.0).abs() < 1e-15 && (dot3(e2, e2) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn mesh_density_mass_matches_discrete_area() {
        let mesh = build_icosphere(3).unwrap();
        let mask = domain_mask(&mesh, &DomainSpec::cap([0.0, 0.0, 1.0], 1.0).unwrap()).unwrap();
        let d = MassDensity::from_mesh(&mesh, &mask, None, Provenance::MeshIndicator).unwrap();
        assert!((d.mass() - mask.discrete_area).abs() < 1e-12);
        let lin: Vec<f64> = mesh.vertices.iter().map(|v| v[0]).collect();
        let w = MassDensity::from_mesh(&mesh, &mask, Some(&lin), Provenance::MeshEigenfunctionWeighted).unwrap();
        assert!(!w.is_nonnegative());
    }

    #[test]
    fn zero_masses_are_dropped() {
        let d = MassDensity::new(vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], vec![0.0, 2.0], Provenance::Explicit).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.mass(), 2.0);
    }
}
