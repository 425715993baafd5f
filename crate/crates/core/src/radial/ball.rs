//! First nontrivial Neumann mode of a geodesic ball, by shooting.
//!
//! On B(e_(n+1), r) the eigenfunctions for mu_1 are J(theta) v_i / sin(theta),
//! where J solves
//!
//! ```text
//! (sin^(n-1) J')' / sin^(n-1) + (mu - (n-1)/sin^2) J = 0,   J(0) = 0,  J'(r) = 0.
//! ```

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use super::ode::Dopri5;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::sphere::gauss_legendre;

/// Starting abscissa of the shooting integration.
const THETA_START: f64 = 1e-6;
/// Grid intervals used to sample a solved profile.
pub const PROFILE_INTERVALS: usize = 2048;
/// Samples of the miss function used to bracket its first root.
const BRACKET_SCAN: usize = 400;

/// A solved ball mode, normalized so that J(r) = 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialMode {
    pub n: usize,
    pub radius: f64,
    pub mu: f64,
    pub theta_grid: Vec<f64>,
    pub j_values: Vec<f64>,
    pub j_prime_values: Vec<f64>,
    /// Max-norm ODE residual on the interior grid.
    pub ode_residual: f64,
}

fn rhs(n: usize, mu: f64) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    let m = (n - 1) as f64;
    move |t: f64, y: &[f64; 2]| {
        let (s, c) = t.sin_cos();
        [y[1], -m * c / s * y[1] - (mu - m / (s * s)) * y[0]]
    }
}

/// Regular solution near the pole: J = t + c t^3 with c = (2(n-1)/3 - mu) / (2(n+2)).
fn frobenius_start(n: usize, mu: f64, t: f64) -> [f64; 2] {
    let nf = n as f64;
    let c = (2.0 * (nf - 1.0) / 3.0 - mu) / (2.0 * (nf + 2.0));
    [t + c * t.powi(3), 1.0 + 3.0 * c * t * t]
}

fn integrator(tol: &Tolerances) -> Dopri5 {
    Dopri5::new(tol.ode_rtol, tol.ode_atol)
}

/// J'(r) for trial `mu`, divided by the largest of |J(r)|, |J'(r)| so that the
/// sign is all that matters at scale.
fn miss(n: usize, r: f64, mu: f64, tol: &Tolerances) -> Result<f64> {
    let f = rhs(n, mu);
    let mut h = 0.0;
    let y = integrator(tol).integrate(&f, THETA_START, frobenius_start(n, mu, THETA_START), r, &mut h)?;
    Ok(y[1] / y[0].abs().max(y[1].abs()).max(f64::MIN_POSITIVE))
}

/// Brent's method on a bracketing interval; `f(lo)` and `f(hi)` have opposite signs.
pub(crate) fn brent<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64, xtol: f64) -> Result<f64> {
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket { lo: a, hi: b });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Ok(b)
}

/// Upper end of the bracket scan: well above the first eigenvalue for any radius.
fn scan_upper(n: usize, r: f64) -> f64 {
    let nf = n as f64;
    (4.0 * nf).max(4.0 * (nf + 1.0) / (r * r))
}

/// Lowest Neumann eigenvalue of the degree-one radial equation on B_r, with
/// its profile J sampled on a uniform grid of [0, r].
pub fn solve_ball_mode(n: usize, r: f64) -> Result<RadialMode> {
    solve_ball_mode_with(n, r, &Tolerances::default())
}

pub fn solve_ball_mode_with(n: usize, r: f64, tol: &Tolerances) -> Result<RadialMode> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension {n} < 2")));
    }
    if !(r > 0.0 && r < PI) {
        return Err(Error::Domain(format!("ball radius {r} outside (0, pi)")));
    }
    let upper = scan_upper(n, r);
    let step = upper / BRACKET_SCAN as f64;
    let mut lo = 0.0;
    let mut f_lo = miss(n, r, lo, tol)?;
    let mut bracket = None;
    for i in 1..=BRACKET_SCAN {
        let hi = step * i as f64;
        let f_hi = miss(n, r, hi, tol)?;
        if f_lo.signum() != f_hi.signum() {
            bracket = Some((lo, hi));
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    let (lo, hi) = bracket.ok_or(Error::Bracket { lo: 0.0, hi: upper })?;
    let mu = brent(|m| miss(n, r, m, tol), lo, hi, tol.shooting_mu)?;
    sample_profile(n, r, mu, tol)
}

fn sample_profile(n: usize, r: f64, mu: f64, tol: &Tolerances) -> Result<RadialMode> {
    let f = rhs(n, mu);
    let solver = integrator(tol);
    let m = PROFILE_INTERVALS;
    let h = r / m as f64;
    let mut theta = Vec::with_capacity(m + 1);
    let mut j = Vec::with_capacity(m + 1);
    let mut jp = Vec::with_capacity(m + 1);
    theta.push(0.0);
    j.push(0.0);
    jp.push(1.0);
    let mut y = frobenius_start(n, mu, THETA_START);
    let mut t = THETA_START;
    let mut step = 0.0;
    for i in 1..=m {
        let ti = if i == m { r } else { i as f64 * h };
        y = solver.integrate(&f, t, y, ti, &mut step)?;
        t = ti;
        theta.push(ti);
        j.push(y[0]);
        jp.push(y[1]);
    }
    let scale = j[m];
    j.iter_mut().for_each(|x| *x /= scale);
    jp.iter_mut().for_each(|x| *x /= scale);
    let mut mode = RadialMode { n, radius: r, mu, theta_grid: theta, j_values: j, j_prime_values: jp, ode_residual: 0.0 };
    mode.ode_residual = mode.residual();
    Ok(mode)
}

impl RadialMode {
    fn step(&self) -> f64 {
        self.radius / (self.theta_grid.len() - 1) as f64
    }

    /// Max-norm residual of the ODE on interior nodes, with J'' taken from a
    /// fourth-order difference of the sampled J'.
    pub fn residual(&self) -> f64 {
        let h = self.step();
        let m = (self.n - 1) as f64;
        let p = &self.j_prime_values;
        let mut worst: f64 = 0.0;
        for i in 2..self.theta_grid.len() - 2 {
            let t = self.theta_grid[i];
            let (s, c) = t.sin_cos();
            let jpp = (-p[i + 2] + 8.0 * p[i + 1] - 8.0 * p[i - 1] + p[i - 2]) / (12.0 * h);
            let res = jpp + m * c / s * p[i] + (self.mu - m / (s * s)) * self.j_values[i];
            worst = worst.max(res.abs());
        }
        worst
    }

    /// Checks J(0) = 0, J'(r) = 0, J > 0 and J' > 0 inside, and the residual bound.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let last = self.theta_grid.len() - 1;
        if self.j_values[0] != 0.0 {
            return Err(Error::Profile("J(0) != 0".into()));
        }
        let jp_end = self.j_prime_values[last];
        if jp_end.abs() > 1e-7 * self.mu.max(1.0) {
            return Err(Error::Profile(format!("J'(r) = {jp_end:.3e}")));
        }
        for i in 1..last {
            if !(self.j_values[i] > 0.0 && self.j_prime_values[i] > 0.0) {
                return Err(Error::Profile(format!("J or J' not positive at theta = {}", self.theta_grid[i])));
            }
        }
        if self.ode_residual > tol.ode_residual * self.mu.max(1.0) {
            return Err(Error::Profile(format!("ODE residual {:.3e}", self.ode_residual)));
        }
        Ok(())
    }
}

/// A ball profile extended to [0, pi]: constant J(r) on [r, pi/2] and even
/// about pi/2. Evaluation is by cubic Hermite interpolation of the samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtendedProfile {
    pub mode: RadialMode,
    /// Cumulative integral of J from 0 to each grid node.
    cumulative: Vec<f64>,
}

pub fn extend_profile(mode: RadialMode) -> Result<ExtendedProfile> {
    if mode.radius > FRAC_PI_2 + 1e-14 {
        return Err(Error::UnsupportedRadius { radius: mode.radius });
    }
    let h = mode.step();
    let mut cumulative = Vec::with_capacity(mode.theta_grid.len());
    cumulative.push(0.0);
    for i in 0..mode.theta_grid.len() - 1 {
        let (j0, j1) = (mode.j_values[i], mode.j_values[i + 1]);
        let (p0, p1) = (mode.j_prime_values[i], mode.j_prime_values[i + 1]);
        let seg = h * (j0 + j1) / 2.0 + h * h * (p0 - p1) / 12.0;
        cumulative.push(cumulative[i] + seg);
    }
    Ok(ExtendedProfile { mode, cumulative })
}

impl ExtendedProfile {
    pub fn n(&self) -> usize {
        self.mode.n
    }

    pub fn radius(&self) -> f64 {
        self.mode.radius
    }

    pub fn mu(&self) -> f64 {
        self.mode.mu
    }

    /// J(r), the value on the constant stretch (1 by normalization).
    pub fn plateau(&self) -> f64 {
        *self.mode.j_values.last().unwrap()
    }

    /// J'(0), the limit of J(theta)/sin(theta) at the poles.
    pub fn slope_at_pole(&self) -> f64 {
        self.mode.j_prime_values[0]
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let h = self.mode.step();
        let last = self.mode.theta_grid.len() - 1;
        let i = ((t / h) as usize).min(last - 1);
        (i, (t - self.mode.theta_grid[i]) / h)
    }

    /// (J, J') on [0, r] by Hermite interpolation.
    fn hermite(&self, t: f64) -> (f64, f64) {
        let h = self.mode.step();
        let (i, s) = self.locate(t);
        let (j0, j1) = (self.mode.j_values[i], self.mode.j_values[i + 1]);
        let (p0, p1) = (self.mode.j_prime_values[i] * h, self.mode.j_prime_values[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let v = (2.0 * s3 - 3.0 * s2 + 1.0) * j0 + (s3 - 2.0 * s2 + s) * p0 + (-2.0 * s3 + 3.0 * s2) * j1 + (s3 - s2) * p1;
        let d = (6.0 * s2 - 6.0 * s) * j0 + (3.0 * s2 - 4.0 * s + 1.0) * p0 + (-6.0 * s2 + 6.0 * s) * j1 + (3.0 * s2 - 2.0 * s) * p1;
        (v, d / h)
    }

    /// Extended (J, J') at any theta in [0, pi].
    pub fn eval(&self, theta: f64) -> (f64, f64) {
        let theta = theta.clamp(0.0, PI);
        let (t, sign) = if theta > FRAC_PI_2 { (PI - theta, -1.0) } else { (theta, 1.0) };
        if t >= self.radius() {
            (self.plateau(), 0.0)
        } else {
            let (v, d) = self.hermite(t);
            (v, sign * d)
        }
    }

    pub fn j(&self, theta: f64) -> f64 {
        self.eval(theta).0
    }

    /// Integral of the extended J over [0, theta].
    pub fn integral(&self, theta: f64) -> f64 {
        let theta = theta.clamp(0.0, PI);
        if theta > FRAC_PI_2 {
            return 2.0 * self.integral(FRAC_PI_2) - self.integral(PI - theta);
        }
        let r = self.radius();
        if theta >= r {
            return *self.cumulative.last().unwrap() + self.plateau() * (theta - r);
        }
        let h = self.mode.step();
        let (i, s) = self.locate(theta);
        let (j0, j1) = (self.mode.j_values[i], self.mode.j_values[i + 1]);
        let (p0, p1) = (self.mode.j_prime_values[i] * h, self.mode.j_prime_values[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let s4 = s3 * s;
        let part = (s - s3 + 0.5 * s4) * j0
            + (0.5 * s2 - 2.0 * s3 / 3.0 + 0.25 * s4) * p0
            + (s3 - 0.5 * s4) * j1
            + (-s3 / 3.0 + 0.25 * s4) * p1;
        self.cumulative[i] + h * part
    }

    /// g(t) = J(arccos t)/sqrt(1 - t^2), continued by J'(0) at t = +-1.
    pub fn g(&self, t: f64) -> f64 {
        let t = t.clamp(-1.0, 1.0);
        let s = ((1.0 - t) * (1.0 + t)).sqrt();
        if s == 0.0 {
            return self.slope_at_pole();
        }
        self.j(t.acos()) / s
    }

    /// G(t) = integral of g over [0, t], computed as int_{arccos t}^{pi/2} J.
    pub fn big_g(&self, t: f64) -> f64 {
        let t = t.clamp(-1.0, 1.0);
        self.integral(FRAC_PI_2) - self.integral(t.acos())
    }

    /// b(theta) = J'^2 + (n-1) J^2 / sin^2(theta).
    pub fn b(&self, theta: f64) -> Result<f64> {
        if !(theta > 0.0 && theta < PI) {
            return Err(Error::Pole { theta });
        }
        let (j, jp) = self.eval(theta);
        let s = theta.sin();
        Ok(jp * jp + (self.n() - 1) as f64 * j * j / (s * s))
    }

    /// Checks that J^2 is nondecreasing and b decreasing on the grid of (0, pi/2).
    pub fn check_monotonicity(&self, slack: f64) -> Result<()> {
        let grid = &self.mode.theta_grid;
        let mut thetas: Vec<f64> = grid[1..].to_vec();
        let r = self.radius();
        let tail = 64;
        for k in 1..tail {
            let t = r + (FRAC_PI_2 - r) * k as f64 / tail as f64;
            if t < FRAC_PI_2 {
                thetas.push(t);
            }
        }
        let mut prev_j2 = 0.0;
        let mut prev_b = f64::INFINITY;
        for &t in &thetas {
            let j2 = self.j(t).powi(2);
            let b = self.b(t)?;
            if j2 < prev_j2 - slack {
                return Err(Error::Profile(format!("J^2 decreases at theta = {t}")));
            }
            if b > prev_b + slack * prev_b.abs().max(1.0) {
                return Err(Error::Profile(format!("b increases at theta = {t}")));
            }
            prev_j2 = j2;
            prev_b = b;
        }
        Ok(())
    }
}

/// Rayleigh quotient int_B (J'^2 + (n-1) J^2/sin^2) / int_B J^2 over the ball
/// whose measure is `half_mass_area`, by Gauss-Legendre per grid interval.
pub fn mu1_from_profile(profile: &ExtendedProfile, half_mass_area: f64) -> Result<f64> {
    let n = profile.n();
    let r = crate::sphere::radius_from_area(half_mass_area, n)?;
    if (r - profile.radius()).abs() > 1e-9 * r.max(1.0) {
        return Err(Error::Domain(format!(
            "profile radius {} does not match the ball of measure {half_mass_area} (radius {r})",
            profile.radius()
        )));
    }
    let (x, w) = gauss_legendre(4);
    let h = profile.mode.step();
    let m = (n - 1) as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..profile.mode.theta_grid.len() - 1 {
        let a = profile.mode.theta_grid[i];
        for (xi, wi) in x.iter().zip(&w) {
            let t = a + 0.5 * h * (xi + 1.0);
            let (j, jp) = profile.eval(t);
            let s = t.sin();
            let vol = s.powi(n as i32 - 1) * 0.5 * h * wi;
            num += (jp * jp + m * j * j / (s * s)) * vol;
            den += j * j * vol;
        }
    }
    Ok(num / den)
}
