//! Areas of cap unions and the random domain and density generators.

use rand::Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fem::{CapSpec, DomainSpec};
use crate::foldmap::geodesic3;
use crate::radial::RadialDensity;

const AZIMUTHS: usize = 4096;

fn frame(c: [f64; 3]) -> [[f64; 3]; 2] {
    let e = if c[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = e[0] * c[0] + e[1] * c[1] + e[2] * c[2];
    let u = [e[0] - d * c[0], e[1] - d * c[1], e[2] - d * c[2]];
    let n = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    let e1 = [u[0] / n, u[1] / n, u[2] / n];
    [e1, [c[1] * e1[2] - c[2] * e1[1], c[2] * e1[0] - c[0] * e1[2], c[0] * e1[1] - c[1] * e1[0]]]
}

/// Area of a union of caps: each cap is integrated along rays from its centre
/// with weight 1/(number of caps covering the point). Along a ray the
/// crossings with the other circles are found in closed form, so only the
/// azimuth is discretized.
pub fn union_area(spec: &DomainSpec) -> Result<f64> {
    let caps = &spec.union;
    let mut total = 0.0;
    for (i, ci) in caps.iter().enumerate() {
        let c = ci.center;
        let [e1, e2] = frame(c);
        let dphi = 2.0 * PI / AZIMUTHS as f64;
        let mut acc = 0.0;
        for k in 0..AZIMUTHS {
            let (s, co) = ((k as f64 + 0.5) * dphi).sin_cos();
            let e = [0, 1, 2].map(|m| co * e1[m] + s * e2[m]);
            let mut cuts = vec![0.0, ci.radius];
            for (j, cj) in caps.iter().enumerate() {
                if j == i {
                    continue;
                }
                let a = c[0] * cj.center[0] + c[1] * cj.center[1] + c[2] * cj.center[2];
                let b = e[0] * cj.center[0] + e[1] * cj.center[1] + e[2] * cj.center[2];
                let r = a.hypot(b);
                if r == 0.0 {
                    continue;
                }
                let x = cj.radius.cos() / r;
                if x.abs() >= 1.0 {
                    continue;
                }
                let t0 = b.atan2(a);
                let beta = x.acos();
                for shift in [-2.0 * PI, 0.0, 2.0 * PI] {
                    for t in [t0 - beta + shift, t0 + beta + shift] {
                        if t > 0.0 && t < ci.radius {
                            cuts.push(t);
                        }
                    }
                }
            }
            cuts.sort_by(f64::total_cmp);
            for w in cuts.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                if hi <= lo {
                    continue;
                }
                let mid = 0.5 * (lo + hi);
                let p = [0, 1, 2].map(|m| mid.cos() * c[m] + mid.sin() * e[m]);
                let cover = caps.iter().filter(|cap| geodesic3(cap.center, p) < cap.radius).count().max(1);
                acc += (lo.cos() - hi.cos()) / cover as f64;
            }
        }
        total += acc * dphi;
    }
    Ok(if spec.complement { 4.0 * PI - total } else { total })
}

fn random_unit(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-3 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Union of 1 to 3 caps, centres uniform, radii log-uniform in [0.2, 1.2],
/// total area in (0.5, 0.9 * 4 pi).
pub fn random_domain(rng: &mut impl Rng) -> Result<(DomainSpec, f64)> {
    for _ in 0..10_000 {
        let k = rng.gen_range(1..=3);
        let caps: Vec<CapSpec> = (0..k).map(|_| CapSpec::new(random_unit(rng), log_uniform(rng, 0.2, 1.2))).collect::<Result<_>>()?;
        let spec = DomainSpec::union_of(caps);
        let area = union_area(&spec)?;
        if area > 0.5 && area < 0.9 * 4.0 * PI {
            return Ok((spec, area));
        }
    }
    Err(Error::Domain("random domain rejection budget exhausted".into()))
}

/// Cap union of area `m` outside the cap B^m about the north pole; radii are
/// rescaled by bisection on the union area. Returns the domain and r_m.
pub fn random_complement_domain(rng: &mut impl Rng, m: f64) -> Result<(DomainSpec, f64)> {
    let north = [0.0, 0.0, 1.0];
    let rm = crate::sphere::radius_from_area(m, 2)?;
    for _ in 0..10_000 {
        let k = rng.gen_range(1..=3);
        let centers: Vec<[f64; 3]> = (0..k).map(|_| random_unit(rng)).collect();
        if centers.iter().any(|c| geodesic3(*c, north) < rm + 0.1) {
            continue;
        }
        let radii: Vec<f64> = (0..k).map(|_| log_uniform(rng, 0.2, 1.2)).collect();
        let build = |s: f64| -> Result<DomainSpec> {
            Ok(DomainSpec::union_of(centers.iter().zip(&radii).map(|(c, r)| CapSpec::new(*c, (s * r).min(PI - 1e-9))).collect::<Result<_>>()?))
        };
        let (mut lo, mut hi) = (0.0, PI / radii.iter().copied().fold(0.0, f64::max));
        if union_area(&build(hi)?)? < m {
            continue;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if union_area(&build(mid)?)? < m {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = 0.5 * (lo + hi);
        let spec = build(s)?;
        let clear = spec.union.iter().all(|c| geodesic3(c.center, north) >= rm + c.radius);
        if clear {
            return Ok((spec, rm));
        }
    }
    Err(Error::Domain(format!("no complement domain of area {m} found")))
}

/// Piecewise-linear radial density with 1 to 5 pieces, node values
/// log-uniform in [floor, 1], one of them equal to 1.
pub fn random_radial_density(rng: &mut impl Rng, floor: f64) -> Result<RadialDensity> {
    let pieces = rng.gen_range(1..=5);
    let mut cuts: Vec<f64> = (1..pieces).map(|_| rng.gen_range(0.1..PI - 0.1)).collect();
    cuts.sort_by(f64::total_cmp);
    let mut breakpoints = vec![0.0];
    breakpoints.extend(cuts);
    breakpoints.push(PI);
    breakpoints.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    let n = breakpoints.len();
    let mut values: Vec<f64> = (0..n).map(|_| log_uniform(rng, floor, 1.0)).collect();
    let top = rng.gen_range(0..n);
    values[top] = 1.0;
    let lowest = values.iter().copied().fold(1.0, f64::min);
    RadialDensity::new(breakpoints, values, lowest)
}
