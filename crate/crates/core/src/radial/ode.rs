//! Adaptive Dormand-Prince 5(4) integrator for small ODE systems.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th- and embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Dopri5 {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Self { rtol, atol, max_steps: 1_000_000 }
    }

    /// Integrates `y' = f(t, y)` from `t0` to `t1`. `h` carries the step size
    /// between calls; pass a nonpositive value to let the first step start small.
    pub fn integrate<const N: usize, F>(&self, f: &F, t0: f64, y0: [f64; N], t1: f64, h: &mut f64) -> Result<[f64; N]>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let span = t1 - t0;
        if span <= 0.0 {
            return Ok(y0);
        }
        let mut t = t0;
        let mut y = y0;
        if !(*h > 0.0) {
            *h = (1e-3 * span).min(1e-2 * t0.abs().max(1e-8));
        }
        let mut k1 = f(t, &y);
        for _ in 0..self.max_steps {
            let last = t + *h >= t1;
            let step = if last { t1 - t } else { *h };
            let (y_new, k7, err) = self.step(f, t, &y, &k1, step);
            if err <= 1.0 {
                t = if last { t1 } else { t + step };
                y = y_new;
                k1 = k7;
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if last {
                    return Ok(y);
                }
                *h = step * fac;
            } else {
                *h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            }
            if *h < 1e-15 * t.abs().max(1.0) {
                return Err(Error::Check(format!("ODE step size underflow at t = {t}")));
            }
        }
        Err(Error::Check("ODE integrator exceeded the step budget".into()))
    }

    fn step<const N: usize, F>(&self, f: &F, t: f64, y: &[f64; N], k1: &[f64; N], h: f64) -> ([f64; N], [f64; N], f64)
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let comb = |coefs: &[(f64, &[f64; N])]| {
            let mut out = *y;
            for (c, k) in coefs {
                for i in 0..N {
                    out[i] += h * c * k[i];
                }
            }
            out
        };
        let k2 = f(t + C2 * h, &comb(&[(A21, k1)]));
        let k3 = f(t + C3 * h, &comb(&[(A31, k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &comb(&[(A41, k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + C5 * h, &comb(&[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(t + h, &comb(&[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = comb(&[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(t + h, &y_new);
        let mut err = 0.0;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sc).powi(2);
        }
        (y_new, k7, (err / N as f64).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let solver = Dopri5::new(1e-12, 1e-14);
        let f = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let mut h = 0.0;
        let y = solver.integrate(&f, 0.0, [0.0, 1.0], 10.0, &mut h).unwrap();
        assert!((y[0] - 10f64.sin()).abs() < 1e-10);
        assert!((y[1] - 10f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn chained_calls_match_single_call() {
        let solver = Dopri5::new(1e-12, 1e-14);
        let f = |t: f64, y: &[f64; 1]| [t * y[0]];
        let mut h = 0.0;
        let mut y = [1.0];
        for i in 0..10 {
            y = solver.integrate(&f, i as f64 * 0.1, y, (i + 1) as f64 * 0.1, &mut h).unwrap();
        }
        assert!((y[0] - 0.5f64.exp()).abs() < 1e-11);
    }
}
