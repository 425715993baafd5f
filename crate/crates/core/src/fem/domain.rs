//! Cap-union domains and their triangle masks.

use serde::{Deserialize, Serialize};
use std::path::Path;

use super::mesh::{dot3, SphMesh};
use crate::error::{Error, Result};
use crate::sphere::{Cap, UnitVec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapSpec {
    pub center: [f64; 3],
    pub radius: f64,
}

impl CapSpec {
    pub fn new(center: [f64; 3], radius: f64) -> Result<Self> {
        let c = UnitVec::new(center.to_vec())?;
        Cap::new(c.clone(), radius)?;
        let v = c.coords();
        Ok(Self { center: [v[0], v[1], v[2]], radius })
    }

    pub fn from_cap(cap: &Cap) -> Result<Self> {
        if cap.center.n() != 2 {
            return Err(Error::Domain("mesh domains live on S^2".into()));
        }
        let v = cap.center.coords();
        Ok(Self { center: [v[0], v[1], v[2]], radius: cap.radius })
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        dot3(self.center, p) > self.radius.cos()
    }
}

/// Union of caps, optionally complemented.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub union: Vec<CapSpec>,
    #[serde(default)]
    pub complement: bool,
}

impl DomainSpec {
    pub fn full_sphere() -> Self {
        Self { union: Vec::new(), complement: true }
    }

    pub fn cap(center: [f64; 3], radius: f64) -> Result<Self> {
        Ok(Self { union: vec![CapSpec::new(center, radius)?], complement: false })
    }

    pub fn union_of(caps: Vec<CapSpec>) -> Self {
        Self { union: caps, complement: false }
    }

    pub fn complemented(mut self) -> Self {
        self.complement = !self.complement;
        self
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        self.union.iter().any(|c| c.contains(p)) != self.complement
    }

    /// Applies the rotation `rot` (row-major 3x3) to every center.
    pub fn rotated(&self, rot: &[[f64; 3]; 3]) -> Self {
        let union = self
            .union
            .iter()
            .map(|c| {
                let x = c.center;
                let y = [dot3(rot[0], x), dot3(rot[1], x), dot3(rot[2], x)];
                CapSpec { center: y, radius: c.radius }
            })
            .collect();
        Self { union, complement: self.complement }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let mut spec: Self = serde_json::from_str(s)?;
        spec.union = spec.union.iter().map(|c| CapSpec::new(c.center, c.radius)).collect::<Result<_>>()?;
        Ok(spec)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Debug, Clone)]
pub struct DomainMask {
    pub triangles: Vec<bool>,
    pub vertices: Vec<bool>,
    /// Sum of flat areas of the retained triangles.
    pub discrete_area: f64,
}

impl DomainMask {
    pub fn num_triangles(&self) -> usize {
        self.triangles.iter().filter(|t| **t).count()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.iter().filter(|v| **v).count()
    }
}

/// Triangles whose centroid lies in the domain.
pub fn domain_mask(mesh: &SphMesh, spec: &DomainSpec) -> Result<DomainMask> {
    mask_from_triangles(mesh, (0..mesh.num_triangles()).map(|t| spec.contains(mesh.centroid(t))).collect())
}

pub fn mask_from_triangles(mesh: &SphMesh, triangles: Vec<bool>) -> Result<DomainMask> {
    let mut vertices = vec![false; mesh.num_vertices()];
    let mut area = 0.0;
    for (t, &keep) in triangles.iter().enumerate() {
        if keep {
            for &v in &mesh.triangles[t] {
                vertices[v] = true;
            }
            area += mesh.flat_area(t);
        }
    }
    if area == 0.0 {
        return Err(Error::EmptyDomain);
    }
    Ok(DomainMask { triangles, vertices, discrete_area: area })
}

/// Connected components of the P1 space: retained vertices joined through
/// retained triangles.
pub fn connected_components(mesh: &SphMesh, mask: &DomainMask) -> usize {
    let mut parent: Vec<usize> = (0..mesh.num_vertices()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (t, tri) in mesh.triangles.iter().enumerate() {
        if mask.triangles[t] {
            for i in 1..3 {
                let (a, b) = (find(&mut parent, tri[0]), find(&mut parent, tri[i]));
                parent[a] = b;
            }
        }
    }
    (0..mesh.num_vertices()).filter(|&v| mask.vertices[v] && find(&mut parent, v) == v).count()
}
