//! P1 stiffness and mass matrices on flat triangles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::domain::DomainMask;
use super::mesh::{dot3, sub, SphMesh};
use crate::error::{Error, Result};
use crate::radial::RadialDensity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    IndicatorOfDomain,
    RadialSample,
    Explicit,
}

/// Per-vertex weights; triangles see the mean of their three corners, which
/// is the P1 interpolant at the centroid.
#[derive(Debug, Clone)]
pub struct DensityField {
    pub values: Vec<f64>,
    pub floor: f64,
    pub kind: FieldKind,
}

impl DensityField {
    pub fn uniform(mesh: &SphMesh) -> Self {
        Self { values: vec![1.0; mesh.num_vertices()], floor: 1.0, kind: FieldKind::Explicit }
    }

    pub fn from_fn(mesh: &SphMesh, floor: f64, f: impl Fn([f64; 3]) -> f64) -> Result<Self> {
        let values: Vec<f64> = mesh.vertices.iter().map(|&v| f(v)).collect();
        Self::new(values, floor, FieldKind::Explicit)
    }

    /// Samples a radial profile around `pole`.
    pub fn radial(mesh: &SphMesh, rho: &RadialDensity, pole: [f64; 3]) -> Result<Self> {
        let values = mesh.vertices.iter().map(|&v| rho.eval(dot3(v, pole).clamp(-1.0, 1.0).acos())).collect();
        Self::new(values, rho.floor(), FieldKind::RadialSample)
    }

    pub fn indicator(mask: &DomainMask) -> Self {
        let values = mask.vertices.iter().map(|&v| if v { 1.0 } else { 0.0 }).collect();
        Self { values, floor: 0.0, kind: FieldKind::IndicatorOfDomain }
    }

    pub fn new(values: Vec<f64>, floor: f64, kind: FieldKind) -> Result<Self> {
        if !(floor >= 0.0) {
            return Err(Error::Domain(format!("negative floor {floor}")));
        }
        if let Some(bad) = values.iter().find(|v| !(**v >= floor - 1e-15 && **v <= 1.0 + 1e-15)) {
            return Err(Error::Domain(format!("density value {bad} outside [{floor}, 1]")));
        }
        if floor == 0.0 && kind != FieldKind::IndicatorOfDomain {
            return Err(Error::Domain("a zero floor needs a domain mask".into()));
        }
        Ok(Self { values, floor, kind })
    }

    pub fn centroid_value(&self, mesh: &SphMesh, t: usize) -> f64 {
        let [a, b, c] = mesh.triangles[t];
        (self.values[a] + self.values[b] + self.values[c]) / 3.0
    }

    pub fn mass(&self, mesh: &SphMesh) -> f64 {
        (0..mesh.num_triangles()).map(|t| mesh.flat_area(t) * self.centroid_value(mesh, t)).sum()
    }
}

/// Symmetric sparse matrix in CSR form with both triangles stored.
#[derive(Debug, Clone)]
pub struct SymCsr {
    pub n: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub data: Vec<f64>,
}

impl SymCsr {
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for p in self.indptr[i]..self.indptr[i + 1] {
                s += self.data[p] * x[self.indices[p]];
            }
            *yi = s;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.data[self.indptr[i]..self.indptr[i + 1]].iter().sum()
    }

    pub fn total(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.apply(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `self + s * other`, assuming the same sparsity pattern.
    pub(crate) fn plus_scaled(&self, s: f64, other: &SymCsr) -> SymCsr {
        debug_assert_eq!(self.indices, other.indices);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + s * b).collect();
        SymCsr { n: self.n, indptr: self.indptr.clone(), indices: self.indices.clone(), data }
    }
}

#[derive(Debug, Clone)]
pub struct Assembly {
    pub stiffness: SymCsr,
    pub mass: SymCsr,
    /// Mesh vertex of each degree of freedom.
    pub dofs: Vec<usize>,
    /// Discrete weighted area, the sum of all mass-matrix entries.
    pub total_mass: f64,
}

impl Assembly {
    pub fn num_dofs(&self) -> usize {
        self.dofs.len()
    }

    /// Scatters a dof vector to all mesh vertices (zero outside).
    pub fn to_vertices(&self, x: &[f64], num_vertices: usize) -> Vec<f64> {
        let mut out = vec![0.0; num_vertices];
        for (d, &v) in self.dofs.iter().enumerate() {
            out[v] = x[d];
        }
        out
    }

    pub fn from_vertices(&self, values: &[f64]) -> Vec<f64> {
        self.dofs.iter().map(|&v| values[v]).collect()
    }
}

fn local_matrices(mesh: &SphMesh, t: usize, w: f64) -> ([f64; 9], [f64; 9]) {
    let p = mesh.corners(t);
    let e = [sub(p[2], p[1]), sub(p[0], p[2]), sub(p[1], p[0])];
    let area = mesh.flat_area(t);
    let mut k = [0.0; 9];
    let mut m = [0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            k[3 * i + j] = w * dot3(e[i], e[j]) / (4.0 * area);
            m[3 * i + j] = w * area / 12.0 * if i == j { 2.0 } else { 1.0 };
        }
    }
    (k, m)
}

/// Assembles on the triangles kept by `mask` (all if `None`), weighted by
/// the centroid value of `field` (1 if `None`).
pub fn assemble(mesh: &SphMesh, mask: Option<&DomainMask>, field: Option<&DensityField>) -> Result<Assembly> {
    if let Some(f) = field {
        if f.values.len() != mesh.num_vertices() {
            return Err(Error::Domain("density field does not match the mesh".into()));
        }
        if f.floor == 0.0 && mask.is_none() {
            return Err(Error::Domain("a zero floor needs a domain mask".into()));
        }
    }
    if let Some(m) = mask {
        if m.triangles.len() != mesh.num_triangles() {
            return Err(Error::Domain("mask does not match the mesh".into()));
        }
    }
    let weights: Vec<f64> = (0..mesh.num_triangles())
        .map(|t| {
            let kept = mask.is_none_or(|m| m.triangles[t]);
            if !kept {
                0.0
            } else {
                field.map_or(1.0, |f| f.centroid_value(mesh, t))
            }
        })
        .collect();

    let mut dof_of = vec![usize::MAX; mesh.num_vertices()];
    let mut dofs = Vec::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        if mask.is_none_or(|m| m.triangles[t]) {
            for &v in tri {
                if dof_of[v] == usize::MAX {
                    dof_of[v] = 0;
                }
            }
        }
    }
    for (v, d) in dof_of.iter_mut().enumerate() {
        if *d == 0 {
            *d = dofs.len();
            dofs.push(v);
        }
    }
    if dofs.is_empty() {
        return Err(Error::EmptyDomain);
    }

    let locals: Vec<Option<([f64; 9], [f64; 9])>> = (0..mesh.num_triangles())
        .into_par_iter()
        .with_min_len(2048)
        .map(|t| (mask.is_none_or(|m| m.triangles[t])).then(|| local_matrices(mesh, t, weights[t])))
        .collect();

    let mut entries: Vec<(usize, usize, f64, f64)> = Vec::with_capacity(9 * mesh.num_triangles());
    for (t, loc) in locals.iter().enumerate() {
        if let Some((k, m)) = loc {
            let tri = mesh.triangles[t];
            for i in 0..3 {
                for j in 0..3 {
                    entries.push((dof_of[tri[i]], dof_of[tri[j]], k[3 * i + j], m[3 * i + j]));
                }
            }
        }
    }
    entries.sort_by_key(|e| (e.0, e.1));

    let n = dofs.len();
    let mut indptr = vec![0usize; n + 1];
    let mut indices = Vec::new();
    let mut kd = Vec::new();
    let mut md = Vec::new();
    let mut last = (usize::MAX, usize::MAX);
    for &(r, c, kv, mv) in &entries {
        if (r, c) == last {
            *kd.last_mut().unwrap() += kv;
            *md.last_mut().unwrap() += mv;
        } else {
            indices.push(c);
            kd.push(kv);
            md.push(mv);
            indptr[r + 1] += 1;
            last = (r, c);
        }
    }
    for i in 0..n {
        indptr[i + 1] += indptr[i];
    }
    let stiffness = SymCsr { n, indptr: indptr.clone(), indices: indices.clone(), data: kd };
    let mass = SymCsr { n, indptr, indices, data: md };
    for i in 0..n {
        if !(mass.row_sum(i) > 0.0) {
            return Err(Error::SingularMass { vertex: dofs[i] });
        }
    }
    let total_mass = mass.total();
    Ok(Assembly { stiffness, mass, dofs, total_mass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{build_icosphere, domain_mask, DomainSpec};

    #[test]
    fn constants_in_kernel_and_mass_partition() {
        let mesh = build_icosphere(3).unwrap();
        let a = assemble(&mesh, None, None).unwrap();
        for i in 0..a.num_dofs() {
            assert!(a.stiffness.row_sum(i).abs() < 1e-10);
        }
        assert!((a.total_mass - mesh.total_flat_area()).abs() < 1e-12);
        let x: Vec<f64> = mesh.vertices.iter().map(|v| v[0] + 0.3 * v[2] * v[1]).collect();
        assert!(a.stiffness.quadratic_form(&x) > 0.0);
    }

    #[test]
    fn weighted_mass_matches_field_mass() {
        let mesh = build_icosphere(3).unwrap();
        let f = DensityField::from_fn(&mesh, 0.1, |v| 0.55 + 0.45 * v[2]).unwrap();
        let a = assemble(&mesh, None, Some(&f)).unwrap();
        assert!((a.total_mass - f.mass(&mesh)).abs() < 1e-12);
    }

    #[test]
    fn masked_assembly_restricts_dofs() {
        let mesh = build_icosphere(3).unwrap();
        let mask = domain_mask(&mesh, &DomainSpec::cap([0.0, 0.0, 1.0], 1.0).unwrap()).unwrap();
        let a = assemble(&mesh, Some(&mask), None).unwrap();
        assert_eq!(a.num_dofs(), mask.num_vertices());
        assert!((a.total_mass - mask.discrete_area).abs() < 1e-12);
        assert!(a.dofs.iter().all(|&v| mask.vertices[v]));
    }

    #[test]
    fn field_validation() {
        let mesh = build_icosphere(1).unwrap();
        assert!(DensityField::from_fn(&mesh, 0.1, |_| 1.5).is_err());
        assert!(DensityField::from_fn(&mesh, 0.5, |_| 0.2).is_err());
        assert!(DensityField::from_fn(&mesh, 0.0, |_| 0.2).is_err());
        let mut f = DensityField::uniform(&mesh);
        f.values.pop();
        assert!(assemble(&mesh, None, Some(&f)).is_err());
    }
}
