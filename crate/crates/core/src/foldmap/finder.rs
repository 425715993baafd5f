//! Zeros of the paired field: homotopy continuation, multistart Newton and an
//! empirical census.

use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::density::{dot3, frame3, normalize3, MassDensity};
use super::field::{geodesic3, pair_field, FoldWeight, PairField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FinderMethod {
    Continuation,
    Multistart,
    Census,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FoldCritPair {
    pub a: [f64; 3],
    pub z: [f64; 3],
    /// R_a z.
    pub w: [f64; 3],
    pub residual_rho: f64,
    pub residual_sigma: f64,
    /// Singular value ratio of the chart Jacobian at the zero.
    pub condition: f64,
    pub method: FinderMethod,
}

impl FoldCritPair {
    pub fn residual(&self) -> f64 {
        self.residual_rho + self.residual_sigma
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FoldOptions {
    /// Excluded geodesic neighbourhood of the diagonal.
    pub delta: f64,
    /// Bound on residual_rho + residual_sigma.
    pub tol: f64,
    pub steps: usize,
    pub min_step: f64,
    /// Radius of the antipodal caps at the t = 1 end of the homotopy.
    pub ball_radius: f64,
    pub ball_nodes: (usize, usize),
    pub max_newton: usize,
    pub fd_step: f64,
    /// Lattice size per factor for the multistart fallback.
    pub grid: usize,
    pub seed: u64,
}

impl Default for FoldOptions {
    fn default() -> Self {
        Self {
            delta: 0.05,
            tol: 1e-8,
            steps: 32,
            min_step: 1e-4,
            ball_radius: 0.5,
            ball_nodes: (24, 48),
            max_newton: 40,
            fd_step: 1e-6,
            grid: 32,
            seed: 0,
        }
    }
}

type Field<'a> = dyn Fn([f64; 3], [f64; 3]) -> Result<PairField> + Sync + 'a;

fn exp3(z: [f64; 3], frame: &[[f64; 3]; 2], c0: f64, c1: f64) -> [f64; 3] {
    let v = [0, 1, 2].map(|k| c0 * frame[0][k] + c1 * frame[1][k]);
    let t = (c0 * c0 + c1 * c1).sqrt();
    if t == 0.0 {
        return z;
    }
    let (s, c) = t.sin_cos();
    normalize3([0, 1, 2].map(|k| c * z[k] + s * v[k] / t))
}

fn chart_residual(f: &PairField, fz: &[[f64; 3]; 2], fw: &[[f64; 3]; 2]) -> Vector4<f64> {
    Vector4::new(dot3(f.first, fz[0]), dot3(f.first, fz[1]), dot3(f.second, fw[0]), dot3(f.second, fw[1]))
}

fn merit(f: &PairField) -> f64 {
    (f.residual_rho.powi(2) + f.residual_sigma.powi(2)).sqrt()
}

fn perturbed(z: [f64; 3], w: [f64; 3], fz: &[[f64; 3]; 2], fw: &[[f64; 3]; 2], d: &[f64; 4]) -> ([f64; 3], [f64; 3]) {
    (exp3(z, fz, d[0], d[1]), exp3(w, fw, d[2], d[3]))
}

/// Central-difference Jacobian of the chart residual at (z, w).
fn jacobian(field: &Field, z: [f64; 3], w: [f64; 3], h: f64) -> Result<Matrix4<f64>> {
    let fz = frame3(z);
    let fw = frame3(w);
    let mut j = Matrix4::zeros();
    for k in 0..4 {
        let mut d = [0.0; 4];
        d[k] = h;
        let (zp, wp) = perturbed(z, w, &fz, &fw, &d);
        d[k] = -h;
        let (zm, wm) = perturbed(z, w, &fz, &fw, &d);
        let col = (chart_residual(&field(zp, wp)?, &fz, &fw) - chart_residual(&field(zm, wm)?, &fz, &fw)) / (2.0 * h);
        j.set_column(k, &col);
    }
    Ok(j)
}

pub(crate) fn condition_number(j: &Matrix4<f64>) -> f64 {
    let s = j.singular_values();
    let max = s.max();
    let min = s.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

struct NewtonOutcome {
    z: [f64; 3],
    w: [f64; 3],
    field: PairField,
    converged: bool,
}

/// Damped Newton in tangent charts with a pseudo-inverse step, iterated until
/// the residual drops to `goal`; converged means it reached `tol`.
fn newton(field: &Field, z0: [f64; 3], w0: [f64; 3], tol: f64, goal: f64, max_iter: usize, h: f64) -> Result<NewtonOutcome> {
    let (mut z, mut w) = (z0, w0);
    let mut f = field(z, w)?;
    for _ in 0..max_iter {
        if f.residual_rho + f.residual_sigma <= goal {
            break;
        }
        let fz = frame3(z);
        let fw = frame3(w);
        let r = chart_residual(&f, &fz, &fw);
        let j = jacobian(field, z, w, h)?;
        let svd = j.svd(true, true);
        let smax = svd.singular_values.max();
        let Ok(step) = svd.solve(&(-r), 1e-12 * smax) else { break };
        let mut step: Vector4<f64> = step;
        let len = step.norm();
        if len > 0.5 {
            step *= 0.5 / len;
        }
        let m0 = merit(&f);
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..16 {
            let d = [step[0] * lambda, step[1] * lambda, step[2] * lambda, step[3] * lambda];
            let (zn, wn) = perturbed(z, w, &fz, &fw, &d);
            if let Ok(fnew) = field(zn, wn) {
                if merit(&fnew) < m0 * (1.0 - 1e-4 * lambda) {
                    z = zn;
                    w = wn;
                    f = fnew;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let converged = f.residual_rho + f.residual_sigma <= tol;
    Ok(NewtonOutcome { z, w, field: f, converged })
}

fn newton_or_fail(field: &Field, z: [f64; 3], w: [f64; 3], tol: f64, opts: &FoldOptions) -> Option<NewtonOutcome> {
    newton(field, z, w, tol, 1e-2 * tol, opts.max_newton, opts.fd_step).ok().filter(|o| o.converged)
}

fn mix(a: &PairField, b: &PairField, t: f64) -> PairField {
    let first = [0, 1, 2].map(|k| (1.0 - t) * a.first[k] + t * b.first[k]);
    let second = [0, 1, 2].map(|k| (1.0 - t) * a.second[k] + t * b.second[k]);
    PairField { a: a.a, first, second, residual_rho: dot3(first, first).sqrt(), residual_sigma: dot3(second, second).sqrt() }
}

/// Fibonacci lattice of `n` points, rotated by `rot`.
pub fn fibonacci_lattice(n: usize, rot: &[[f64; 3]; 3]) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let y = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - y * y).sqrt();
            let (s, c) = (golden * i as f64).sin_cos();
            let p = [r * c, y, r * s];
            normalize3([0, 1, 2].map(|k| dot3(rot[k], p)))
        })
        .collect()
}

pub(crate) fn seeded_rotation(seed: u64) -> [[f64; 3]; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
    let tau = 2.0 * std::f64::consts::PI;
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (w, x, y, z) = (a * (tau * u2).sin(), a * (tau * u2).cos(), b * (tau * u3).sin(), b * (tau * u3).cos());
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)],
        [2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)],
        [2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

/// Start pairs from two lattices (the second offset by a fixed rotation so
/// no pair sits on the diagonal), dropping pairs within 2 delta of it.
fn start_pairs(grid: usize, seed: u64, delta: f64) -> Vec<([f64; 3], [f64; 3])> {
    let zs = fibonacci_lattice(grid, &seeded_rotation(seed));
    let ws = fibonacci_lattice(grid, &seeded_rotation(seed ^ 0x9e37_79b9_7f4a_7c15));
    let mut out = Vec::with_capacity(grid * grid);
    for z in &zs {
        for w in &ws {
            if geodesic3(*z, *w) >= 2.0 * delta {
                out.push((*z, *w));
            }
        }
    }
    out
}

fn finish(field: &Field, o: &NewtonOutcome, method: FinderMethod, h: f64) -> FoldCritPair {
    let condition = jacobian(field, o.z, o.w, h).map(|j| condition_number(&j)).unwrap_or(f64::INFINITY);
    FoldCritPair {
        a: o.field.a,
        z: o.z,
        w: o.w,
        residual_rho: o.field.residual_rho,
        residual_sigma: o.field.residual_sigma,
        condition,
        method,
    }
}

fn check_rho(rho: &MassDensity) -> Result<()> {
    if !rho.is_nonnegative() || rho.mass() <= 0.0 {
        return Err(Error::Domain("rho must be nonnegative with positive mass".into()));
    }
    Ok(())
}

/// A common zero of the folded rho- and sigma-gradients. Continuation runs
/// from the antipodal-cap pair at t = 1, where (e3, -e3) is an exact zero,
/// down to t = 0; multistart Newton is the fallback.
pub fn find_fold_pair(rho: &MassDensity, sigma: &MassDensity, weight: &dyn FoldWeight, opts: &FoldOptions) -> Result<FoldCritPair> {
    check_rho(rho)?;
    let p = [0.0, 0.0, 1.0];
    let q = [0.0, 0.0, -1.0];
    let (nt, np) = opts.ball_nodes;
    let ball_rho = MassDensity::cap_indicator(p, opts.ball_radius, nt, np)?;
    let ball_sigma = MassDensity::cap_indicator(q, opts.ball_radius, nt, np)?;
    let target = move |z, w| pair_field(rho, sigma, z, w, weight, opts.delta);

    let mut t = 1.0f64;
    let (mut z, mut w) = (p, q);
    let max_dt = 1.0 / opts.steps as f64;
    let mut dt = max_dt;
    let mut best = f64::INFINITY;
    while t > 0.0 {
        let tn = if t - dt < 0.5 * opts.min_step { 0.0 } else { t - dt };
        let (br, bs) = (&ball_rho, &ball_sigma);
        let field = move |z, w| -> Result<PairField> {
            if tn == 0.0 {
                return target(z, w);
            }
            let b = pair_field(br, bs, z, w, weight, opts.delta)?;
            Ok(mix(&target(z, w)?, &b, tn))
        };
        match newton_or_fail(&field, z, w, opts.tol, opts) {
            Some(o) => {
                t = tn;
                z = o.z;
                w = o.w;
                best = o.field.residual_rho + o.field.residual_sigma;
                dt = (2.0 * dt).min(max_dt);
            }
            None => {
                dt *= 0.5;
                if dt < opts.min_step {
                    break;
                }
            }
        }
    }
    if t == 0.0 {
        if let Some(o) = newton_or_fail(&target, z, w, opts.tol, opts) {
            return Ok(finish(&target, &o, FinderMethod::Continuation, opts.fd_step));
        }
    }

    let mut starts = start_pairs(opts.grid, opts.seed, opts.delta);
    let scores: Vec<f64> = starts.par_iter().map(|&(z, w)| target(z, w).map(|f| merit(&f)).unwrap_or(f64::INFINITY)).collect();
    let mut order: Vec<usize> = (0..starts.len()).collect();
    order.sort_by(|&i, &j| scores[i].total_cmp(&scores[j]));
    starts = order.into_iter().map(|i| starts[i]).collect();
    let batch = 4 * rayon::current_num_threads().max(1);
    for chunk in starts.chunks(batch) {
        let outs: Vec<Option<NewtonOutcome>> = chunk
            .par_iter()
            .map(|&(z, w)| newton(&target, z, w, opts.tol, 1e-2 * opts.tol, opts.max_newton, opts.fd_step).ok())
            .collect();
        for o in outs.into_iter().flatten() {
            best = best.min(o.field.residual_rho + o.field.residual_sigma);
            if o.converged {
                return Ok(finish(&target, &o, FinderMethod::Multistart, opts.fd_step));
            }
        }
    }
    Err(Error::PairNotFound { best_residual: best })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CensusOptions {
    pub grid: usize,
    pub tol: f64,
    pub dedup: f64,
    pub condition_max: f64,
    pub delta: f64,
    pub max_newton: usize,
    pub fd_step: f64,
    pub seed: u64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self { grid: 32, tol: 1e-8, dedup: 1e-4, condition_max: 1e6, delta: 0.05, max_newton: 40, fd_step: 1e-6, seed: 0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusZero {
    #[serde(flatten)]
    pub pair: FoldCritPair,
    /// Shared by (z, w) and its swap (w, z).
    pub orbit: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Census {
    pub zeros: Vec<CensusZero>,
    pub orbits: usize,
    pub starts: usize,
    pub converged_starts: usize,
    pub max_condition: f64,
    pub degenerate: bool,
    pub degeneracy: Option<String>,
}

impl Census {
    pub fn count(&self) -> usize {
        self.zeros.len()
    }

    /// Whether the count is 2 mod 4; meaningless when degenerate.
    pub fn count_is_two_mod_four(&self) -> bool {
        self.count() % 4 == 2
    }
}

fn pair_distance(a: ([f64; 3], [f64; 3]), b: ([f64; 3], [f64; 3])) -> f64 {
    geodesic3(a.0, b.0).hypot(geodesic3(a.1, b.1))
}

/// Multistart Newton from a lattice on (S^2)^2, deduplicated, with swap
/// images added and grouped into orbits.
pub fn zero_census(rho: &MassDensity, sigma: &MassDensity, weight: &dyn FoldWeight, opts: &CensusOptions) -> Result<Census> {
    check_rho(rho)?;
    let field = move |z, w| pair_field(rho, sigma, z, w, weight, opts.delta);
    let starts = start_pairs(opts.grid, opts.seed, opts.delta);
    let outs: Vec<NewtonOutcome> = starts
        .par_iter()
        .filter_map(|&(z, w)| newton(&field, z, w, opts.tol, 1e-3 * opts.tol, opts.max_newton, opts.fd_step).ok())
        .filter(|o| o.converged)
        .collect();
    let converged_starts = outs.len();

    let mut found: Vec<(([f64; 3], [f64; 3]), PairField)> = Vec::new();
    let unseen = |p: ([f64; 3], [f64; 3]), found: &[(([f64; 3], [f64; 3]), PairField)]| found.iter().all(|(q, _)| pair_distance(p, *q) >= opts.dedup);
    for o in &outs {
        if unseen((o.z, o.w), &found) {
            found.push(((o.z, o.w), o.field));
        }
    }
    let base = found.len();
    for i in 0..base {
        let ((z, w), _) = found[i];
        if unseen((w, z), &found) {
            if let Ok(f) = field(w, z) {
                if f.residual_rho + f.residual_sigma <= opts.tol {
                    found.push(((w, z), f));
                }
            }
        }
    }

    let mut orbit = vec![usize::MAX; found.len()];
    let mut orbits = 0;
    for i in 0..found.len() {
        if orbit[i] != usize::MAX {
            continue;
        }
        orbit[i] = orbits;
        let ((z, w), _) = found[i];
        if let Some(j) = (0..found.len()).find(|&j| j != i && orbit[j] == usize::MAX && pair_distance((w, z), found[j].0) < opts.dedup) {
            orbit[j] = orbits;
        }
        orbits += 1;
    }

    let zeros: Vec<CensusZero> = found
        .par_iter()
        .zip(orbit.par_iter())
        .map(|(((z, w), f), &orbit)| {
            let o = NewtonOutcome { z: *z, w: *w, field: *f, converged: true };
            CensusZero { pair: finish(&field, &o, FinderMethod::Census, opts.fd_step), orbit }
        })
        .collect();
    let max_condition = zeros.iter().map(|z| z.pair.condition).fold(0.0, f64::max);
    let degeneracy = if sigma.total_variation() == 0.0 {
        Some("sigma vanishes identically".to_string())
    } else if zeros.is_empty() {
        Some("no zeros found".to_string())
    } else if max_condition > opts.condition_max {
        Some(format!("Jacobian condition {max_condition:.3e} exceeds {:.1e}", opts.condition_max))
    } else {
        None
    };
    Ok(Census { zeros, orbits, starts: starts.len(), converged_starts, max_condition, degenerate: degeneracy.is_some(), degeneracy })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_map_moves_by_the_step_length() {
        let z = normalize3([0.3, 0.1, -0.9]);
        let f = frame3(z);
        let y = exp3(z, &f, 0.3, -0.4);
        assert!((geodesic3(z, y) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn lattice_is_spread() {
        let pts = fibonacci_lattice(32, &seeded_rotation(1));
        let c = [0, 1, 2].map(|k| pts.iter().map(|p| p[k]).sum::<f64>() / 32.0);
        assert!(dot3(c, c).sqrt() < 0.05);
        let starts = start_pairs(32, 0, 0.05);
        assert!(starts.len() > 1000 && starts.len() <= 1024);
    }
}
