//! Icosphere meshes of S^2.

use std::collections::HashMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::sphere::{QuadratureKind, QuadratureRule};

pub const MAX_LEVEL: usize = 8;

#[derive(Debug, Clone)]
pub struct SphMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
    pub level: usize,
}

fn normalized(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Fixed generic rotation of the base icosahedron. Without it the coordinate
/// planes are mirror planes of the mesh and centroid masks of caps centred on
/// the axes drop whole rows of triangles whose centroids land on the boundary.
fn rotate(v: [f64; 3]) -> [f64; 3] {
    let (a, b, c) = (0.3711f64, 0.8627f64, 1.2183f64);
    let rz = |v: [f64; 3], t: f64| [t.cos() * v[0] - t.sin() * v[1], t.sin() * v[0] + t.cos() * v[1], v[2]];
    let rx = |v: [f64; 3], t: f64| [v[0], t.cos() * v[1] - t.sin() * v[2], t.sin() * v[1] + t.cos() * v[2]];
    rz(rx(rz(v, a), b), c)
}

/// Subdivided icosahedron with 20 * 4^level outward-oriented triangles.
pub fn build_icosphere(level: usize) -> Result<SphMesh> {
    if level > MAX_LEVEL {
        return Err(Error::MeshLevel(level));
    }
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<[f64; 3]> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .into_iter()
    .map(|v| rotate(normalized(v)))
    .collect();
    let mut triangles: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, verts: &mut Vec<[f64; 3]>| {
            let key = (a.min(b), a.max(b));
            *midpoints.entry(key).or_insert_with(|| {
                let (p, q) = (verts[a], verts[b]);
                verts.push(normalized([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(triangles.len() * 4);
        for &[a, b, c] in &triangles {
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        triangles = next;
    }
    Ok(SphMesh { vertices, triangles, level })
}

impl SphMesh {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn corners(&self, t: usize) -> [[f64; 3]; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn flat_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        let n = cross(sub(b, a), sub(c, a));
        0.5 * dot3(n, n).sqrt()
    }

    /// Area of the geodesic triangle with the same corners.
    pub fn spherical_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        let num = dot3(a, cross(b, c)).abs();
        let den = 1.0 + dot3(a, b) + dot3(b, c) + dot3(c, a);
        2.0 * num.atan2(den)
    }

    /// Radial projection of the flat centroid.
    pub fn centroid(&self, t: usize) -> [f64; 3] {
        let [a, b, c] = self.corners(t);
        normalized([a[0] + b[0] + c[0], a[1] + b[1] + c[1], a[2] + b[2] + c[2]])
    }

    pub fn total_flat_area(&self) -> f64 {
        (0..self.num_triangles()).map(|t| self.flat_area(t)).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        let mut edges = std::collections::HashSet::new();
        for &[a, b, c] in &self.triangles {
            for (p, q) in [(a, b), (b, c), (c, a)] {
                edges.insert((p.min(q), p.max(q)));
            }
        }
        self.num_vertices() as i64 - edges.len() as i64 + self.num_triangles() as i64
    }

    /// Every undirected edge is shared by exactly two triangles, traversed in
    /// opposite directions.
    pub fn is_closed_oriented_manifold(&self) -> bool {
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for &[a, b, c] in &self.triangles {
            for e in [(a, b), (b, c), (c, a)] {
                *directed.entry(e).or_default() += 1;
            }
        }
        directed.iter().all(|(&(p, q), &count)| count == 1 && directed.get(&(q, p)) == Some(&1))
    }

    pub fn min_angle_degrees(&self) -> f64 {
        let mut best = f64::INFINITY;
        for t in 0..self.num_triangles() {
            let v = self.corners(t);
            for i in 0..3 {
                let (p, q, r) = (v[i], v[(i + 1) % 3], v[(i + 2) % 3]);
                let (u, w) = (sub(q, p), sub(r, p));
                let cos = dot3(u, w) / (dot3(u, u) * dot3(w, w)).sqrt();
                best = best.min(cos.clamp(-1.0, 1.0).acos().to_degrees());
            }
        }
        best
    }

    pub fn max_edge_length(&self) -> f64 {
        let mut h: f64 = 0.0;
        for t in 0..self.num_triangles() {
            let v = self.corners(t);
            for i in 0..3 {
                let d = sub(v[i], v[(i + 1) % 3]);
                h = h.max(dot3(d, d).sqrt());
            }
        }
        h
    }

    pub fn write_off<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "OFF")?;
        writeln!(out, "{} {} 0", self.num_vertices(), self.num_triangles())?;
        for v in &self.vertices {
            writeln!(out, "{:.17} {:.17} {:.17}", v[0], v[1], v[2])?;
        }
        for t in &self.triangles {
            writeln!(out, "3 {} {} {}", t[0], t[1], t[2])?;
        }
        Ok(())
    }

    /// Vertex rule: each vertex carries a third of the geodesic area of its
    /// triangles, so the weights sum to 4 pi.
    pub fn vertex_rule(&self) -> QuadratureRule {
        let mut w = vec![0.0; self.num_vertices()];
        for (t, tri) in self.triangles.iter().enumerate() {
            let a = self.spherical_area(t) / 3.0;
            for &v in tri {
                w[v] += a;
            }
        }
        let coords = self.vertices.iter().flatten().copied().collect();
        QuadratureRule::from_parts(3, coords, w, QuadratureKind::MeshVertex).expect("mesh weights are positive")
    }

    /// One node per triangle at the projected centroid with the geodesic
    /// triangle area as weight.
    pub fn midpoint_rule(&self) -> QuadratureRule {
        let n = self.num_triangles();
        let mut coords = Vec::with_capacity(3 * n);
        let mut w = Vec::with_capacity(n);
        for t in 0..n {
            coords.extend_from_slice(&self.centroid(t));
            w.push(self.spherical_area(t));
        }
        QuadratureRule::from_parts(3, coords, w, QuadratureKind::MeshTriangleMidpoint).expect("mesh weights are positive")
    }
}
