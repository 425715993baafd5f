//! Radially symmetric densities on S^n.
//!
//! Writing u = f(theta) Y(omega) with Y a degree-l harmonic on S^(n-1) turns
//! the weighted Rayleigh quotient int rho |grad u|^2 / int rho u^2 into one
//! Sturm-Liouville problem per degree:
//!
//! ```text
//! int rho (f'^2 + L f^2 / sin^2) sin^(n-1)  /  int rho f^2 sin^(n-1),   L = l (l + n - 2)
//! ```
//!
//! Each band is discretized with P1 elements on a graded theta grid that
//! contains every breakpoint of rho, solved by Sturm-sequence bisection on
//! the tridiagonal pencil, and extrapolated across two nested grids.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sphere::{gauss_legendre, radius_from_area, sphere_area};

const RHO_PL_JSON: &str = include_str!("../../data/rho_pl.json");

/// Piecewise-linear profile rho(theta) on [0, pi].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialDensity {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    floor: f64,
}

impl RadialDensity {
    /// Breakpoints must increase from 0 to pi (the last one within 1e-6 of
    /// pi); values must lie in [floor, 1] with floor > 0.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>, floor: f64) -> Result<Self> {
        let d = Self { breakpoints, values, floor };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let (b, v) = (&self.breakpoints, &self.values);
        if b.len() < 2 || b.len() != v.len() {
            return Err(Error::Domain("density needs matching breakpoints and values (at least two)".into()));
        }
        if b[0] != 0.0 || (b[b.len() - 1] - PI).abs() > 1e-6 {
            return Err(Error::Domain("density breakpoints must run from 0 to pi".into()));
        }
        if b.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("density breakpoints must be strictly increasing".into()));
        }
        if !(self.floor > 0.0) {
            return Err(Error::Domain(format!("density floor {} must be positive", self.floor)));
        }
        if v.iter().any(|x| !(*x >= self.floor && *x <= 1.0)) {
            return Err(Error::Domain("density values must lie in [floor, 1]".into()));
        }
        Ok(())
    }

    pub fn uniform() -> Self {
        Self { breakpoints: vec![0.0, PI], values: vec![1.0, 1.0], floor: 1.0 }
    }

    /// The piecewise-affine density with first eigenvalue above the cap of
    /// equal mass on S^2.
    pub fn rho_pl() -> Self {
        Self::from_json_str(RHO_PL_JSON).expect("shipped rho_pl.json is valid")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let d: Self = serde_json::from_str(s)?;
        d.validate()?;
        Ok(d)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let b = &self.breakpoints;
        if theta <= b[0] {
            return self.values[0];
        }
        let last = b.len() - 1;
        if theta >= b[last] {
            return self.values[last];
        }
        let i = b.partition_point(|x| *x <= theta) - 1;
        let s = (theta - b[i]) / (b[i + 1] - b[i]);
        self.values[i] + s * (self.values[i + 1] - self.values[i])
    }

    /// int_{S^n} rho.
    pub fn mass(&self, n: usize) -> f64 {
        let (x, w) = gauss_legendre(24);
        let mut pieces: Vec<f64> = self.breakpoints.clone();
        *pieces.last_mut().unwrap() = PI;
        let mut total = 0.0;
        for seg in pieces.windows(2) {
            let h = seg[1] - seg[0];
            for (xi, wi) in x.iter().zip(&w) {
                let t = seg[0] + 0.5 * h * (xi + 1.0);
                total += 0.5 * h * wi * self.eval(t) * t.sin().powi(n as i32 - 1);
            }
        }
        sphere_area(n - 1) * total
    }
}

/// Dimension of the degree-l spherical harmonics on S^(n-1).
pub fn harmonic_multiplicity(n: usize, degree: usize) -> usize {
    let d = n - 1;
    if degree == 0 {
        return 1;
    }
    binomial(degree + d, d) - if degree >= 2 { binomial(degree + d - 2, d) } else { 0 }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Debug, Clone, Copy)]
pub struct DensityOptions {
    /// Intervals of the fine theta grid (the coarse grid has half).
    pub intervals: usize,
    /// Highest harmonic degree included.
    pub degree_max: usize,
    /// Extrapolate eigenvalues from the nested coarse/fine pair.
    pub richardson: bool,
}

impl Default for DensityOptions {
    fn default() -> Self {
        Self { intervals: 4096, degree_max: 8, richardson: true }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub mu: f64,
    pub degree: usize,
    /// Position of this eigenvalue within its degree band (0 = lowest).
    pub band_index: usize,
    /// |K f - mu M f| / |M f| on the fine grid.
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialFunction {
    pub degree: usize,
    pub band_index: usize,
    pub values: Vec<f64>,
}

/// mu_0 <= mu_1 <= ... <= mu_k with multiplicities, plus the radial factors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensitySpectrum {
    pub n: usize,
    pub entries: Vec<SpectrumEntry>,
    pub grid: Vec<f64>,
    pub radial_functions: Vec<RadialFunction>,
    /// Set when mu_k comes within 5% of the lowest eigenvalue of the highest
    /// degree band, so higher bands might reorder the list.
    pub truncation_warning: bool,
}

impl DensitySpectrum {
    pub fn mu(&self, k: usize) -> f64 {
        self.entries[k].mu
    }

    pub fn mu1(&self) -> f64 {
        self.mu(1)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.mu).collect()
    }

    pub fn radial_function(&self, degree: usize, band_index: usize) -> Option<&RadialFunction> {
        self.radial_functions.iter().find(|f| f.degree == degree && f.band_index == band_index)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "degree", "mu", "residual"])?;
        for (i, e) in self.entries.iter().enumerate() {
            w.write_record([i.to_string(), e.degree.to_string(), format!("{:.12}", e.mu), format!("{:.3e}", e.residual)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Radial 1D problem on [0, end] with weight rho; the far end is either the
/// antipodal pole (Dirichlet for l >= 1) or a Neumann boundary.
struct RadialProblem<'a> {
    n: usize,
    rho: &'a dyn Fn(f64) -> f64,
    end_is_pole: bool,
}

/// Element-level integrals shared by all degree bands.
struct Elements {
    nodes: Vec<f64>,
    /// int w phi'^2 h^2 per element, w = rho sin^(n-1).
    stiff: Vec<f64>,
    /// 2x2 mass matrices, int rho sin^(n-1) phi_a phi_b.
    mass: Vec<[f64; 3]>,
    /// 2x2 potential matrices, int rho sin^(n-3) phi_a phi_b.
    pot: Vec<[f64; 3]>,
}

impl RadialProblem<'_> {
    fn elements(&self, nodes: Vec<f64>) -> Elements {
        let (x, w) = gauss_legendre(4);
        let ne = nodes.len() - 1;
        let mut stiff = Vec::with_capacity(ne);
        let mut mass = Vec::with_capacity(ne);
        let mut pot = Vec::with_capacity(ne);
        let p = self.n as i32 - 1;
        for e in 0..ne {
            let (a, b) = (nodes[e], nodes[e + 1]);
            let h = b - a;
            let (mut st, mut m, mut q) = (0.0, [0.0; 3], [0.0; 3]);
            for (xi, wi) in x.iter().zip(&w) {
                let s = 0.5 * (xi + 1.0);
                let t = a + h * s;
                let jw = 0.5 * h * wi * (self.rho)(t);
                let sn = t.sin();
                let vol = jw * sn.powi(p);
                let potw = jw * sn.powi(p - 2);
                let (fa, fb) = (1.0 - s, s);
                st += vol;
                m[0] += vol * fa * fa;
                m[1] += vol * fa * fb;
                m[2] += vol * fb * fb;
                q[0] += potw * fa * fa;
                q[1] += potw * fa * fb;
                q[2] += potw * fb * fb;
            }
            stiff.push(st / (h * h));
            mass.push(m);
            pot.push(q);
        }
        Elements { nodes, stiff, mass, pot }
    }
}

/// Symmetric tridiagonal matrix: diagonal and first off-diagonal.
#[derive(Debug, Clone)]
struct Tridiag {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiag {
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off[i] * x[i + 1];
                }
                y
            })
            .collect()
    }
}

struct Band {
    k: Tridiag,
    m: Tridiag,
}

impl Elements {
    fn band(&self, degree: usize, n: usize, end_is_pole: bool) -> Band {
        let l = (degree * (degree + n - 2)) as f64;
        let nn = self.nodes.len();
        let mut kd = vec![0.0; nn];
        let mut ko = vec![0.0; nn - 1];
        let mut md = vec![0.0; nn];
        let mut mo = vec![0.0; nn - 1];
        for e in 0..nn - 1 {
            let (s, m, q) = (self.stiff[e], self.mass[e], self.pot[e]);
            kd[e] += s + l * q[0];
            kd[e + 1] += s + l * q[2];
            ko[e] += -s + l * q[1];
            md[e] += m[0];
            md[e + 1] += m[2];
            mo[e] += m[1];
        }
        // Degrees >= 1 vanish at the poles.
        let lo = usize::from(degree > 0);
        let hi = if degree > 0 && end_is_pole { nn - 1 } else { nn };
        Band {
            k: Tridiag { diag: kd[lo..hi].to_vec(), off: ko[lo..hi - 1].to_vec() },
            m: Tridiag { diag: md[lo..hi].to_vec(), off: mo[lo..hi - 1].to_vec() },
        }
    }
}

impl Band {
    /// Number of eigenvalues of K f = mu M f below `sigma` (Sylvester inertia
    /// of K - sigma M).
    fn count_below(&self, sigma: f64) -> usize {
        let mut count = 0;
        let mut d = 0.0;
        for i in 0..self.k.diag.len() {
            let a = self.k.diag[i] - sigma * self.m.diag[i];
            d = if i == 0 {
                a
            } else {
                let b = self.k.off[i - 1] - sigma * self.m.off[i - 1];
                a - b * b / d
            };
            if d == 0.0 {
                d = -f64::EPSILON * a.abs().max(f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The lowest `count` eigenvalues by bisection.
    fn eigenvalues(&self, count: usize) -> Vec<f64> {
        let count = count.min(self.k.diag.len());
        let mut hi = 1.0;
        while self.count_below(hi) < count {
            hi *= 2.0;
        }
        (0..count)
            .map(|j| {
                // K is positive semidefinite; roundoff in the pivots near a
                // zero eigenvalue would otherwise drag the bracket negative.
                let (mut a, mut b) = (0.0, hi);
                while self.count_below(b) <= j {
                    b *= 2.0;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if self.count_below(mid) > j {
                        b = mid;
                    } else {
                        a = mid;
                    }
                    if b - a <= 4.0 * f64::EPSILON * b.abs().max(1e-300) {
                        break;
                    }
                }
                0.5 * (a + b)
            })
            .collect()
    }

    /// Inverse iteration at a shift just below `mu`; returns the M-normalized
    /// vector and its relative residual.
    fn eigenvector(&self, mu: f64) -> (Vec<f64>, f64) {
        let n = self.k.diag.len();
        let sigma = mu - 1e-9 * mu.abs().max(1e-3);
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64 / 13.0).collect();
        for _ in 0..4 {
            let rhs = self.m.apply(&x);
            x = self.solve_shifted(sigma, &rhs);
            let nm = dot_slices(&x, &self.m.apply(&x)).sqrt();
            x.iter_mut().for_each(|v| *v /= nm);
        }
        let kx = self.k.apply(&x);
        let mx = self.m.apply(&x);
        let r: f64 = kx.iter().zip(&mx).map(|(a, b)| (a - mu * b).powi(2)).sum::<f64>().sqrt();
        let scale = mx.iter().map(|v| v * v).sum::<f64>().sqrt();
        (x, r / scale)
    }

    /// Thomas algorithm for (K - sigma M) x = rhs.
    fn solve_shifted(&self, sigma: f64, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let a: Vec<f64> = (0..n).map(|i| self.k.diag[i] - sigma * self.m.diag[i]).collect();
        let b: Vec<f64> = (0..n.saturating_sub(1)).map(|i| self.k.off[i] - sigma * self.m.off[i]).collect();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut piv = a[0];
        if piv == 0.0 {
            piv = f64::EPSILON;
        }
        d[0] = rhs[0] / piv;
        if n > 1 {
            c[0] = b[0] / piv;
        }
        for i in 1..n {
            let mut p = a[i] - b[i - 1] * c[i - 1];
            if p == 0.0 {
                p = f64::EPSILON * a[i].abs().max(1.0);
            }
            if i + 1 < n {
                c[i] = b[i] / p;
            }
            d[i] = (rhs[i] - b[i - 1] * d[i - 1]) / p;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        d
    }
}

fn dot_slices(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Grading map [0, 1] -> [0, end], three times finer at both ends.
fn grade(end: f64, s: f64) -> f64 {
    end * (s - 0.5 * (2.0 * PI * s).sin() / (2.0 * PI))
}

fn ungrade(end: f64, theta: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if grade(end, mid) < theta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Nested coarse and fine grids on [0, end] with every breakpoint a node.
/// Between consecutive breakpoints the nodes are uniform in the graded
/// parameter, so both grids are smooth images of a uniform grid there and
/// the eigenvalue error expands in even powers of the spacing.
fn nested_grids(end: f64, intervals: usize, breakpoints: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut knots = vec![0.0];
    for &b in breakpoints {
        if b > 1e-12 && b < end - 1e-12 {
            knots.push(ungrade(end, b));
        }
    }
    knots.push(1.0);
    let mut coarse = vec![0.0];
    let mut fine = vec![0.0];
    for w in knots.windows(2) {
        let m = ((intervals as f64 * (w[1] - w[0])).round() as usize).max(2);
        for i in 1..=2 * m {
            let s = w[0] + (w[1] - w[0]) * i as f64 / (2 * m) as f64;
            let t = if i == 2 * m { grade_knot(end, w[1], breakpoints) } else { grade(end, s) };
            fine.push(t);
            if i % 2 == 0 {
                coarse.push(t);
            }
        }
    }
    (coarse, fine)
}

/// Knots land exactly on the breakpoint they came from.
fn grade_knot(end: f64, s: f64, breakpoints: &[f64]) -> f64 {
    if s >= 1.0 {
        return end;
    }
    let t = grade(end, s);
    breakpoints.iter().copied().find(|b| (b - t).abs() < 1e-9).unwrap_or(t)
}

struct BandSolution {
    degree: usize,
    mus: Vec<f64>,
    residuals: Vec<f64>,
    vectors: Vec<Vec<f64>>,
}

fn solve_bands(problem: &RadialProblem<'_>, grids: (Vec<f64>, Vec<f64>), per_band: usize, opts: &DensityOptions) -> (Vec<f64>, Vec<BandSolution>) {
    let (coarse, fine_nodes) = grids;
    let fine = problem.elements(fine_nodes);
    let coarse_el = opts.richardson.then(|| problem.elements(coarse));
    let bands: Vec<BandSolution> = (0..=opts.degree_max)
        .map(|degree| {
            let band = fine.band(degree, problem.n, problem.end_is_pole);
            let mut mus = band.eigenvalues(per_band);
            let mut vectors = Vec::with_capacity(mus.len());
            let mut residuals = Vec::with_capacity(mus.len());
            for &mu in &mus {
                let (v, res) = band.eigenvector(mu);
                vectors.push(embed(&v, degree, problem.end_is_pole, fine.nodes.len()));
                residuals.push(res);
            }
            if let Some(c) = &coarse_el {
                let cm = c.band(degree, problem.n, problem.end_is_pole).eigenvalues(per_band);
                for (m, mc) in mus.iter_mut().zip(cm) {
                    *m = (4.0 * *m - mc) / 3.0;
                }
            }
            BandSolution { degree, mus, residuals, vectors }
        })
        .collect();
    (fine.nodes, bands)
}

/// Re-inserts the Dirichlet pole values removed from degree >= 1 bands.
fn embed(v: &[f64], degree: usize, end_is_pole: bool, len: usize) -> Vec<f64> {
    if degree == 0 {
        return v.to_vec();
    }
    let mut out = vec![0.0; len];
    out[1..1 + v.len()].copy_from_slice(v);
    if !end_is_pole {
        debug_assert_eq!(v.len(), len - 1);
    }
    out
}

fn merge(n: usize, k: usize, bands: &[BandSolution]) -> Vec<SpectrumEntry> {
    let mut all = Vec::new();
    for b in bands {
        let mult = harmonic_multiplicity(n, b.degree);
        for (j, (&mu, &res)) in b.mus.iter().zip(&b.residuals).enumerate() {
            for _ in 0..mult {
                all.push(SpectrumEntry { mu, degree: b.degree, band_index: j, residual: res });
            }
        }
    }
    all.sort_by(|a, b| a.mu.total_cmp(&b.mu).then(a.degree.cmp(&b.degree)));
    all.truncate(k + 1);
    all
}

/// Lowest k nontrivial eigenvalues (plus mu_0) of the radial density `rho`
/// on the whole of S^n.
pub fn solve_radial_density(n: usize, rho: &RadialDensity, k: usize, degree_max: usize) -> Result<DensitySpectrum> {
    solve_radial_density_with(n, rho, k, &DensityOptions { degree_max, ..Default::default() })
}

pub fn solve_radial_density_with(n: usize, rho: &RadialDensity, k: usize, opts: &DensityOptions) -> Result<DensitySpectrum> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension {n} < 2")));
    }
    if k < 1 {
        return Err(Error::Domain("need k >= 1".into()));
    }
    if opts.degree_max < 2 {
        return Err(Error::Domain("degree cutoff must be at least 2".into()));
    }
    rho.validate()?;
    let f = |t: f64| rho.eval(t);
    let problem = RadialProblem { n, rho: &f, end_is_pole: true };
    let grids = nested_grids(PI, opts.intervals / 2, &rho.breakpoints);
    let (grid, bands) = solve_bands(&problem, grids, k + 1, opts);
    let entries = merge(n, k, &bands);
    let top = bands.last().and_then(|b| b.mus.first()).copied().unwrap_or(f64::INFINITY);
    let truncation_warning = entries.last().is_some_and(|e| e.mu >= 0.95 * top);
    let radial_functions = collect_functions(&entries, &bands);
    Ok(DensitySpectrum { n, entries, grid, radial_functions, truncation_warning })
}

fn collect_functions(entries: &[SpectrumEntry], bands: &[BandSolution]) -> Vec<RadialFunction> {
    let mut out: Vec<RadialFunction> = Vec::new();
    for e in entries {
        if out.iter().any(|f| f.degree == e.degree && f.band_index == e.band_index) {
            continue;
        }
        out.push(RadialFunction {
            degree: e.degree,
            band_index: e.band_index,
            values: bands[e.degree].vectors[e.band_index].clone(),
        });
    }
    out
}

/// Spectrum of a single geodesic ball B^area (mu_0 .. mu_k), from the same
/// separated discretization with a Neumann end at the ball radius.
pub fn ball_spectrum(n: usize, area: f64, k: usize) -> Result<Vec<f64>> {
    let r = radius_from_area(area, n)?;
    let one = |_: f64| 1.0;
    let problem = RadialProblem { n, rho: &one, end_is_pole: false };
    let opts = DensityOptions::default();
    let grids = nested_grids(r, opts.intervals / 2, &[]);
    let (_, bands) = solve_bands(&problem, grids, k + 1, &opts);
    Ok(merge(n, k, &bands).into_iter().map(|e| e.mu).collect())
}

/// Spectrum mu_0 .. mu_k of two disjoint copies of B^area_each.
pub fn two_cap_spectrum(n: usize, area_each: f64, k: usize) -> Result<Vec<f64>> {
    if !(2.0 * area_each < sphere_area(n)) {
        return Err(Error::Domain(format!("two caps of area {area_each} do not fit disjointly in S^{n}")));
    }
    let single = ball_spectrum(n, area_each, k)?;
    let mut both: Vec<f64> = single.iter().flat_map(|&m| [m, m]).collect();
    both.sort_by(f64::total_cmp);
    both.truncate(k + 1);
    Ok(both)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::solve_ball_mode;
    use crate::sphere::cap_area;

    #[test]
    fn multiplicities() {
        assert_eq!(harmonic_multiplicity(2, 0), 1);
        assert_eq!(harmonic_multiplicity(2, 1), 2);
        assert_eq!(harmonic_multiplicity(2, 5), 2);
        assert_eq!(harmonic_multiplicity(3, 1), 3);
        assert_eq!(harmonic_multiplicity(3, 4), 9);
        assert_eq!(harmonic_multiplicity(4, 2), 9);
    }

    #[test]
    fn validation() {
        assert!(RadialDensity::new(vec![0.0, PI], vec![1.0, 1.0], 0.0).is_err());
        assert!(RadialDensity::new(vec![0.0, 1.0], vec![1.0, 1.0], 0.5).is_err());
        assert!(RadialDensity::new(vec![0.0, 2.0, 1.0, PI], vec![1.0; 4], 0.5).is_err());
        assert!(RadialDensity::new(vec![0.0, PI], vec![1.0, 0.1], 0.5).is_err());
        assert!(RadialDensity::new(vec![0.0, PI], vec![1.0, 1.2], 0.5).is_err());
        assert!(RadialDensity::new(vec![0.0, PI], vec![1.0, 0.5], 0.5).is_ok());
    }

    #[test]
    fn rho_pl_values_and_mass() {
        let d = RadialDensity::rho_pl();
        assert_eq!(d.breakpoints(), &[0.0, 1.3, 1.4, 3.14159265]);
        assert_eq!(d.values(), &[1.0, 1.0, 0.19480547, 0.04829935]);
        assert!((d.mass(2) - 6.0).abs() < 1e-3, "{}", d.mass(2));
        let back = RadialDensity::from_json_str(&d.to_json().unwrap()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn uniform_mass_is_sphere_area() {
        for n in 2..=4 {
            assert!((RadialDensity::uniform().mass(n) - sphere_area(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn full_sphere_spectrum() {
        let s = solve_radial_density(2, &RadialDensity::uniform(), 8, 8).unwrap();
        assert!(s.mu(0).abs() < 1e-9);
        for k in 1..=3 {
            assert!((s.mu(k) - 2.0).abs() < 1e-6, "mu_{k} = {}", s.mu(k));
        }
        for k in 4..=8 {
            assert!((s.mu(k) - 6.0).abs() < 1e-5, "mu_{k} = {}", s.mu(k));
        }
        assert!(!s.truncation_warning);
        let s3 = solve_radial_density(3, &RadialDensity::uniform(), 4, 8).unwrap();
        for k in 1..=4 {
            assert!((s3.mu(k) - 3.0).abs() < 1e-6, "mu_{k} = {}", s3.mu(k));
        }
    }

    #[test]
    fn pole_values_vanish_for_positive_degree() {
        let s = solve_radial_density(2, &RadialDensity::uniform(), 3, 4).unwrap();
        let f = s.radial_function(1, 0).unwrap();
        assert_eq!(f.values[0], 0.0);
        assert_eq!(*f.values.last().unwrap(), 0.0);
        assert_eq!(f.values.len(), s.grid.len());
        assert!(s.entries.iter().all(|e| e.residual < 1e-8));
    }

    #[test]
    fn truncation_flag_fires_for_low_cutoff() {
        let s = solve_radial_density(2, &RadialDensity::uniform(), 12, 2).unwrap();
        assert!(s.truncation_warning);
    }

    #[test]
    fn ball_spectrum_matches_shooting() {
        for &(n, r) in &[(2usize, 1.0), (3, 0.8), (2, 0.3)] {
            let area = cap_area(r, n).unwrap();
            let spec = ball_spectrum(n, area, n).unwrap();
            let shoot = solve_ball_mode(n, r).unwrap().mu;
            for k in 1..=n {
                assert!((spec[k] - shoot).abs() < 1e-6 * shoot, "n={n} r={r} k={k}: {} vs {shoot}", spec[k]);
            }
        }
    }

    #[test]
    fn two_caps_duplicate_the_ball() {
        let n = 2;
        let area = 3.0;
        let s = two_cap_spectrum(n, area, 5).unwrap();
        let shoot = solve_ball_mode(n, radius_from_area(area, n).unwrap()).unwrap().mu;
        assert!(s[0].abs() < 1e-9 && s[1].abs() < 1e-9, "{s:?}");
        for k in 2..=2 * n + 1 {
            assert!((s[k] - shoot).abs() < 1e-6 * shoot);
        }
        assert!(two_cap_spectrum(2, 2.0 * PI, 3).is_err());
    }

    #[test]
    fn csv_output() {
        let s = solve_radial_density(2, &RadialDensity::uniform(), 3, 4).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("index,degree,mu,residual"));
        assert_eq!(text.lines().count(), 5);
    }
}
