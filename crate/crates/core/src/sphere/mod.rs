//! Geometry of the unit sphere S^n embedded in R^(n+1).
//!
//! Points are [`UnitVec`]s; tangent vectors at a point are plain `Vec<f64>`
//! in ambient coordinates. The sign conventions follow the usual split of the
//! sphere by a unit vector `a` into the open hemispheres `a- = {z.a < 0}`,
//! `a+ = {z.a > 0}` and the great sphere `a_perp = {z.a = 0}`.

pub mod quadrature;

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

pub use quadrature::{gauss_legendre, QuadratureKind, QuadratureRule, ZonalRule};

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// A point of S^n, stored by its n+1 ambient coordinates.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UnitVec(Vec<f64>);

impl fmt::Debug for UnitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitVec{:?}", self.0)
    }
}

impl TryFrom<Vec<f64>> for UnitVec {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        UnitVec::new(v)
    }
}

impl From<UnitVec> for Vec<f64> {
    fn from(v: UnitVec) -> Self {
        v.0
    }
}

impl AsRef<[f64]> for UnitVec {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl UnitVec {
    /// Normalizes `coords`. Needs at least three coordinates (n >= 2) and a
    /// nonzero vector.
    pub fn new(mut coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::Domain(format!(
                "sphere dimension must be at least 2, got {} coordinates",
                coords.len()
            )));
        }
        let r = norm(&coords);
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        coords.iter_mut().for_each(|c| *c /= r);
        Ok(Self(coords))
    }

    /// Normalizes without the dimension checks; callers guarantee a nonzero
    /// vector of length >= 3.
    pub(crate) fn normalize_unchecked(mut coords: Vec<f64>) -> Self {
        let r = norm(&coords);
        coords.iter_mut().for_each(|c| *c /= r);
        Self(coords)
    }

    /// The basis vector e_i (0-based) of R^(n+1).
    pub fn basis(n: usize, i: usize) -> Self {
        assert!(n >= 2 && i <= n, "basis vector e_{i} of S^{n}");
        let mut v = vec![0.0; n + 1];
        v[i] = 1.0;
        Self(v)
    }

    /// The north pole e_(n+1).
    pub fn north(n: usize) -> Self {
        Self::basis(n, n)
    }

    /// Point at polar angle `theta` from the north pole of S^2 and azimuth `phi`.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let s = theta.sin();
        Self::normalize_unchecked(vec![s * phi.cos(), s * phi.sin(), theta.cos()])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Sphere dimension n (ambient dimension minus one).
    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    pub fn dot(&self, other: &UnitVec) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn neg(&self) -> UnitVec {
        Self(self.0.iter().map(|c| -c).collect())
    }

    /// Geodesic distance, accurate for nearby and nearly antipodal points.
    pub fn distance(&self, other: &UnitVec) -> f64 {
        let chord: f64 = self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        2.0 * (0.5 * chord).min(1.0).asin()
    }

    /// Exponential map: follow the geodesic from `self` with initial tangent
    /// velocity `tangent` for unit time.
    pub fn exp(&self, tangent: &[f64]) -> UnitVec {
        let t = norm(tangent);
        if t == 0.0 {
            return self.clone();
        }
        let (s, c) = t.sin_cos();
        let v = self.0.iter().zip(tangent).map(|(z, x)| c * z + s * x / t).collect();
        Self::normalize_unchecked(v)
    }

    /// Orthonormal basis of the tangent space at `self`, built by
    /// Gram-Schmidt from the coordinate axes least aligned with `self`.
    pub fn tangent_frame(&self) -> Vec<Vec<f64>> {
        let d = self.0.len();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&i, &j| self.0[i].abs().total_cmp(&self.0[j].abs()).then(i.cmp(&j)));
        let mut frame: Vec<Vec<f64>> = Vec::with_capacity(d - 1);
        for &axis in order.iter().take(d - 1) {
            let mut e = vec![0.0; d];
            e[axis] = 1.0;
            let zc = self.0[axis];
            for (ei, zi) in e.iter_mut().zip(&self.0) {
                *ei -= zc * zi;
            }
            for f in &frame {
                let c = dot(&e, f);
                for (ei, fi) in e.iter_mut().zip(f) {
                    *ei -= c * fi;
                }
            }
            let r = norm(&e);
            e.iter_mut().for_each(|x| *x /= r);
            frame.push(e);
        }
        frame
    }
}

/// R_a(z) = z - 2 (z.a) a.
pub fn reflect(a: &UnitVec, z: &UnitVec) -> UnitVec {
    UnitVec::normalize_unchecked(reflect_vec(a.coords(), z.coords()))
}

/// Reflection of an arbitrary ambient vector (used on tangent vectors).
pub fn reflect_vec(a: &[f64], x: &[f64]) -> Vec<f64> {
    let s = 2.0 * dot(a, x);
    x.iter().zip(a).map(|(xi, ai)| xi - s * ai).collect()
}

/// Fold map F_a: reflection on the open hemisphere a+, identity on a- and a_perp.
pub fn fold(a: &UnitVec, z: &UnitVec) -> UnitVec {
    if a.dot(z) > 0.0 {
        reflect(a, z)
    } else {
        z.clone()
    }
}

/// pi_z(w) = w - (w.z) z, the projection onto the tangent space at z.
pub fn tangent_project(z: &UnitVec, w: &[f64]) -> Vec<f64> {
    let c = dot(z.coords(), w);
    w.iter().zip(z.coords()).map(|(wi, zi)| wi - c * zi).collect()
}

/// Normalized midpoint (z + w)/|z + w| of the geodesic segment [z, w].
pub fn fold_midpoint(z: &UnitVec, w: &UnitVec, antipodal_tol: f64) -> Result<UnitVec> {
    let s: Vec<f64> = z.coords().iter().zip(w.coords()).map(|(a, b)| a + b).collect();
    let r = norm(&s);
    if r < antipodal_tol {
        return Err(Error::Antipodal { norm: r });
    }
    Ok(UnitVec::normalize_unchecked(s))
}

/// The fold direction a(z, w) = (w - z)/|w - z|, for which w = R_a z and z lies in a-.
pub fn fold_direction(z: &UnitVec, w: &UnitVec) -> Option<UnitVec> {
    let d: Vec<f64> = w.coords().iter().zip(z.coords()).map(|(a, b)| a - b).collect();
    let r = norm(&d);
    (r > 0.0).then(|| UnitVec::normalize_unchecked(d))
}

/// Measure |S^n|.
pub fn sphere_area(n: usize) -> f64 {
    match n {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (n as f64 - 1.0) * sphere_area(n - 2),
    }
}

/// Integral of sin^m over [0, r] by composite Gauss-Legendre; keeps full
/// relative accuracy for small r where the reduction formula cancels.
fn sin_power_integral(m: usize, r: f64) -> f64 {
    let (x, w) = gauss_legendre(20);
    let panels = 4;
    let h = r / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            total += 0.5 * h * wi * (a + 0.5 * h * (xi + 1.0)).sin().powi(m as i32);
        }
    }
    total
}

/// Measure of a geodesic ball of radius `radius` in S^n.
pub fn cap_area(radius: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension {n} < 2")));
    }
    if !(radius > 0.0 && radius < PI) {
        return Err(Error::Domain(format!("cap radius {radius} outside (0, pi)")));
    }
    Ok(if n == 2 {
        2.0 * PI * (1.0 - radius.cos())
    } else {
        sphere_area(n - 1) * sin_power_integral(n - 1, radius)
    })
}

/// Radius of the geodesic ball of measure `area` in S^n.
pub fn radius_from_area(area: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension {n} < 2")));
    }
    let total = sphere_area(n);
    if !(area > 0.0 && area < total) {
        return Err(Error::Domain(format!("cap area {area} outside (0, {total})")));
    }
    if n == 2 {
        // 1 - cos r = area / 2pi, written to keep accuracy for small caps.
        return Ok(2.0 * (area / (4.0 * PI)).sqrt().asin());
    }
    // Safeguarded Newton on the monotone map r -> cap_area(r).
    let (mut lo, mut hi) = (0.0_f64, PI);
    let mut r = PI * area / total;
    let lateral = sphere_area(n - 1);
    for _ in 0..200 {
        let f = lateral * sin_power_integral(n - 1, r) - area;
        if f > 0.0 {
            hi = r;
        } else {
            lo = r;
        }
        let df = lateral * r.sin().powi(n as i32 - 1);
        let mut next = r - f / df;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - r).abs() <= 1e-16 * r.max(1.0) || hi - lo < 1e-16 {
            r = next;
            break;
        }
        r = next;
    }
    Ok(r)
}

/// A geodesic ball B(center, radius).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    pub center: UnitVec,
    pub radius: f64,
}

impl Cap {
    pub fn new(center: UnitVec, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < PI) {
            return Err(Error::Domain(format!("cap radius {radius} outside (0, pi)")));
        }
        Ok(Self { center, radius })
    }

    /// The cap of measure `area` around `center`.
    pub fn with_area(center: UnitVec, area: f64) -> Result<Self> {
        let r = radius_from_area(area, center.n())?;
        Self::new(center, r)
    }

    pub fn area(&self) -> f64 {
        cap_area(self.radius, self.center.n()).expect("radius validated at construction")
    }

    /// Open-ball membership.
    pub fn contains(&self, v: &[f64]) -> bool {
        dot(self.center.coords(), v) > self.radius.cos()
    }
}
