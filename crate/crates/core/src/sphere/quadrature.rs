//! Quadrature rules on S^2 (and zonal rules on S^n), plus fold-aware integration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

use super::{dot, sphere_area, UnitVec};
use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        if d.is_finite() {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (t * p - p0) / (t * t - 1.0);
    (p, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadratureKind {
    /// Gauss-Legendre in cos(theta) times the uniform rule in phi, about a pole.
    ProductGauss,
    /// Lumped-mass weights at mesh vertices.
    MeshVertex,
    /// One point per triangle at its (projected) centroid.
    MeshTriangleMidpoint,
}

/// Nodes on S^n with positive weights. Coordinates are stored flat, `dim`
/// entries per node.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadratureRule {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
    kind: QuadratureKind,
}

impl QuadratureRule {
    pub fn from_parts(dim: usize, coords: Vec<f64>, weights: Vec<f64>, kind: QuadratureKind) -> Result<Self> {
        if !(3..=8).contains(&dim) || coords.len() != dim * weights.len() {
            return Err(Error::Domain("inconsistent quadrature layout".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Domain("quadrature weights must be positive".into()));
        }
        Ok(Self { dim, coords, weights, kind })
    }

    /// Product rule on S^2 around `pole`: `n_theta` Gauss-Legendre nodes in
    /// cos(theta) and `n_phi` equispaced azimuths.
    pub fn product_gauss(pole: &UnitVec, n_theta: usize, n_phi: usize) -> Self {
        assert_eq!(pole.n(), 2, "product rule is implemented on S^2");
        let frame = pole.tangent_frame();
        let (e1, e2, p) = (&frame[0], &frame[1], pole.coords());
        let (x, w) = gauss_legendre(n_theta);
        let dphi = 2.0 * PI / n_phi as f64;
        let mut coords = Vec::with_capacity(3 * n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for (ct, wt) in x.iter().zip(&w) {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for j in 0..n_phi {
                let (sp, cp) = ((j as f64 + 0.5) * dphi).sin_cos();
                for k in 0..3 {
                    coords.push(st * (cp * e1[k] + sp * e2[k]) + ct * p[k]);
                }
                weights.push(wt * dphi);
            }
        }
        Self { dim: 3, coords, weights, kind: QuadratureKind::ProductGauss }
    }

    /// Default resolution used by the acceptance runs.
    pub fn product_gauss_default(pole: &UnitVec) -> Self {
        Self::product_gauss(pole, 256, 512)
    }

    pub fn kind(&self) -> QuadratureKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.coords.chunks_exact(self.dim).zip(self.weights.iter().copied())
    }

    pub fn total_weight(&self) -> f64 {
        ordered_sum(&self.weights)
    }

    /// Sum of w_i f(v_i), computed in parallel with a fixed reduction order.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let dim = self.dim;
        chunked_sum(self.len(), |i| self.weights[i] * f(&self.coords[i * dim..(i + 1) * dim]))
    }

    /// Writes one line per node: coordinates then weight.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (0..self.dim).map(|k| format!("x{k}")).collect();
        header.push("weight".into());
        wtr.write_record(&header)?;
        for (v, w) in self.nodes() {
            let mut row: Vec<String> = v.iter().map(|c| format!("{c:.17e}")).collect();
            row.push(format!("{w:.17e}"));
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

const CHUNK: usize = 2048;

/// Sums `term(i)` for i in 0..n with a deterministic parallel reduction.
pub(crate) fn chunked_sum<F>(n: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let partial: Vec<f64> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| (c * CHUNK..((c + 1) * CHUNK).min(n)).map(&term).sum())
        .collect();
    partial.iter().sum()
}

/// Vector-valued variant of [`chunked_sum`]; `term` accumulates into its buffer.
pub(crate) fn chunked_sum_vec<F>(n: usize, len: usize, term: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync,
{
    let partial: Vec<Vec<f64>> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; len];
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                term(i, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; len];
    for p in &partial {
        for (t, x) in total.iter_mut().zip(p) {
            *t += x;
        }
    }
    total
}

fn ordered_sum(xs: &[f64]) -> f64 {
    xs.iter().sum()
}

/// Writes F_a(v) into `out` and returns the branch taken (true = reflected).
///
/// Nodes with a.v <= tol take the identity branch.
#[inline]
pub(crate) fn fold_into(a: &[f64], v: &[f64], tol: f64, out: &mut [f64]) -> bool {
    let s = dot(a, v);
    if s > tol {
        for k in 0..v.len() {
            out[k] = v[k] - 2.0 * s * a[k];
        }
        true
    } else {
        out.copy_from_slice(v);
        false
    }
}

/// Integral over the sphere of rho(v) f(v, F_a v), classifying each node by
/// the sign of a.v.
pub fn integrate_folded<R, F>(rule: &QuadratureRule, a: &UnitVec, rho: R, f: F) -> f64
where
    R: Fn(&[f64]) -> f64 + Sync,
    F: Fn(&[f64], &[f64]) -> f64 + Sync,
{
    integrate_folded_tol(rule, a, 0.0, rho, f)
}

pub fn integrate_folded_tol<R, F>(rule: &QuadratureRule, a: &UnitVec, node_tol: f64, rho: R, f: F) -> f64
where
    R: Fn(&[f64]) -> f64 + Sync,
    F: Fn(&[f64], &[f64]) -> f64 + Sync,
{
    let dim = rule.dim();
    let av = a.coords();
    chunked_sum(rule.len(), |i| {
        let v = rule.node(i);
        let r = rho(v);
        if r == 0.0 {
            return 0.0;
        }
        let mut fv = [0.0; 8];
        let fv = &mut fv[..dim];
        fold_into(av, v, node_tol, fv);
        rule.weight(i) * r * f(v, fv)
    })
}

/// One-dimensional rule integrating zonal functions f(theta) over S^n:
/// sum_i w_i f(theta_i) ~ |S^(n-1)| int_0^pi f(theta) sin^(n-1)(theta) dtheta.
#[derive(Debug, Clone)]
pub struct ZonalRule {
    pub n: usize,
    pub thetas: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ZonalRule {
    /// Composite Gauss-Legendre in theta over `panels` panels of `order` points.
    pub fn new(n: usize, panels: usize, order: usize) -> Self {
        Self::on_interval(n, 0.0, PI, panels, order)
    }

    /// Same as [`ZonalRule::new`] restricted to polar angles in [lo, hi].
    pub fn on_interval(n: usize, lo: f64, hi: f64, panels: usize, order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let lateral = sphere_area(n - 1);
        let h = (hi - lo) / panels as f64;
        let mut thetas = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let a = lo + p as f64 * h;
            for (xi, wi) in x.iter().zip(&w) {
                let t = a + 0.5 * h * (xi + 1.0);
                thetas.push(t);
                weights.push(0.5 * h * wi * lateral * t.sin().powi(n as i32 - 1));
            }
        }
        Self { n, thetas, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.thetas.iter().zip(&self.weights).map(|(t, w)| w * f(*t)).sum()
    }
}
