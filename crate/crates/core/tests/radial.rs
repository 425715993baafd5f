use nalgebra::{DMatrix, SymmetricEigen};
use neumann_sphere::radial::{
    extend_profile, solve_ball_mode, solve_radial_density, solve_radial_density_with, DensityOptions, RadialDensity,
};
use neumann_sphere::sphere::{radius_from_area, sphere_area};
use neumann_sphere::Tolerances;
use std::f64::consts::{FRAC_PI_2, PI};

/// Lowest eigenvalue of -(sin^(n-1) J')' + (n-1) sin^(n-3) J = mu sin^(n-1) J on
/// [0, r] with J(0) = 0 and J'(r) = 0, by vertex-centred finite differences.
fn fd_ball_mu(n: usize, r: f64, cells: usize) -> f64 {
    let h = r / cells as f64;
    let p = |t: f64| t.sin().powi(n as i32 - 1);
    let q = |t: f64| (n - 1) as f64 * t.sin().powi(n as i32 - 3);
    let m = cells;
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut w = vec![0.0; m];
    for k in 0..m {
        let i = k + 1;
        let t = i as f64 * h;
        let half = if i == cells { 0.5 } else { 1.0 };
        let pl = p(t - 0.5 * h);
        a[(k, k)] += pl / h + half * h * q(t);
        if k > 0 {
            a[(k, k - 1)] -= pl / h;
            a[(k - 1, k)] -= pl / h;
            a[(k - 1, k - 1)] += pl / h;
        }
        w[k] = half * h * p(t);
    }
    for i in 0..m {
        for j in 0..m {
            a[(i, j)] /= (w[i] * w[j]).sqrt();
        }
    }
    SymmetricEigen::new(a).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

#[test]
fn shooting_agrees_with_finite_differences() {
    for &(n, r) in &[(2usize, 1.0), (2, FRAC_PI_2), (3, 0.8), (4, 1.2)] {
        let coarse = fd_ball_mu(n, r, 300);
        let fine = fd_ball_mu(n, r, 600);
        let extrapolated = (4.0 * fine - coarse) / 3.0;
        let mu = solve_ball_mode(n, r).unwrap().mu;
        assert!((mu - extrapolated).abs() < 1e-5, "n={n} r={r}: shooting {mu} vs fd {extrapolated}");
    }
}

#[test]
fn first_eigenvalue_decreases_with_radius() {
    let radii: Vec<f64> = (1..=50).map(|i| 0.1 + (FRAC_PI_2 - 0.1) * (i - 1) as f64 / 49.0).collect();
    let mus: Vec<f64> = radii.iter().map(|&r| solve_ball_mode(2, r).unwrap().mu).collect();
    for (w, r) in mus.windows(2).zip(&radii) {
        assert!(w[1] < w[0], "not decreasing after r={r}: {} -> {}", w[0], w[1]);
    }
}

/// First nonzero Neumann eigenvalue of the unit disk: RK4 shooting on
/// J'' + J'/x + (lambda - 1/x^2) J = 0 with J ~ x at 0 and J'(1) = 0.
fn disk_neumann_eigenvalue() -> f64 {
    let miss = |lam: f64| {
        let f = |x: f64, y: [f64; 2]| [y[1], -y[1] / x - (lam - 1.0 / (x * x)) * y[0]];
        let x0: f64 = 1e-4;
        let mut y = [x0 - lam * x0.powi(3) / 8.0, 1.0 - 3.0 * lam * x0 * x0 / 8.0];
        let steps = 20_000;
        let h = (1.0 - x0) / steps as f64;
        let mut x = x0;
        for _ in 0..steps {
            let add = |y: [f64; 2], k: [f64; 2], s: f64| [y[0] + s * k[0], y[1] + s * k[1]];
            let k1 = f(x, y);
            let k2 = f(x + h / 2.0, add(y, k1, h / 2.0));
            let k3 = f(x + h / 2.0, add(y, k2, h / 2.0));
            let k4 = f(x + h, add(y, k3, h));
            for i in 0..2 {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            x += h;
        }
        y[1]
    };
    let (mut a, mut b) = (2.0, 5.0);
    assert!(miss(a) * miss(b) < 0.0);
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if miss(a) * miss(m) <= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn small_caps_scale_like_the_euclidean_disk() {
    let disk = disk_neumann_eigenvalue();
    assert!((disk - 1.8412f64.powi(2)).abs() < 1e-3, "disk oracle {disk}");
    let r = 0.05;
    let scaled = solve_ball_mode(2, r).unwrap().mu * r * r;
    assert!((scaled / disk - 1.0).abs() < 0.01, "{scaled} vs {disk}");
}

#[test]
fn piecewise_linear_counterexample() {
    let rho = RadialDensity::rho_pl();
    assert!((rho.mass(2) - 6.0).abs() < 1e-3);
    let spec = solve_radial_density(2, &rho, 3, 8).unwrap();
    let ball = solve_ball_mode(2, radius_from_area(6.0, 2).unwrap()).unwrap().mu;
    assert!((spec.mu1() - 2.213185).abs() < 2e-3, "mu1 = {}", spec.mu1());
    assert!((ball - 2.071487).abs() < 1e-3);
    assert!(spec.mu1() > ball);
    assert!(!spec.truncation_warning);
}

#[test]
fn grid_refinement_is_stable_for_the_counterexample() {
    let rho = RadialDensity::rho_pl();
    let coarse = solve_radial_density_with(2, &rho, 1, &DensityOptions { intervals: 2048, ..Default::default() }).unwrap();
    let fine = solve_radial_density(2, &rho, 1, 8).unwrap();
    assert!((coarse.mu1() - fine.mu1()).abs() < 1e-6, "{} vs {}", coarse.mu1(), fine.mu1());
}

#[test]
fn smoothed_cap_indicator_keeps_the_ball_eigenvalue() {
    // The quotient is invariant under rescaling the weight on the complement,
    // so the floor region carries its own low modes (the large complementary
    // cap) below the ball value. The ball eigenvalue must still be present.
    let floor = 1e-6;
    let d = 0.02;
    let rho = RadialDensity::new(vec![0.0, 1.0 - d, 1.0 + d, PI], vec![1.0, 1.0, floor, floor], floor).unwrap();
    let spec = solve_radial_density(2, &rho, 8, 8).unwrap();
    let ball = solve_ball_mode(2, 1.0).unwrap().mu;
    assert!(spec.mu1() < ball, "mu1 = {}", spec.mu1());
    let closest = spec.eigenvalues().iter().map(|m| (m / ball - 1.0).abs()).fold(f64::INFINITY, f64::min);
    assert!(closest < 0.02, "spectrum {:?} vs ball {ball}", spec.eigenvalues());
}

#[test]
fn uniform_three_sphere() {
    let spec = solve_radial_density(3, &RadialDensity::uniform(), 4, 8).unwrap();
    let half = solve_ball_mode(3, FRAC_PI_2).unwrap().mu;
    assert!((1.0 / spec.mu(2) + 1.0 / spec.mu(3) - 2.0 / half).abs() < 1e-6);
    assert!((RadialDensity::uniform().mass(3) / 2.0 - sphere_area(3) / 2.0).abs() < 1e-12);
}

#[test]
fn solved_modes_have_monotone_profiles() {
    let tol = Tolerances::default();
    for &(n, r) in &[(2usize, 0.3), (2, 1.0), (2, 1.5257), (3, 0.8), (4, 1.4)] {
        let mode = solve_ball_mode(n, r).unwrap();
        mode.validate(&tol).unwrap();
        extend_profile(mode).unwrap().check_monotonicity(tol.monotonicity_slack).unwrap();
    }
}
