//! Property checks shared by the property suite and the acceptance run.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use neumann_sphere::fem::{build_icosphere, domain_mask, solve_on_mesh, CapSpec, DomainSpec, SolverOptions};
use neumann_sphere::foldmap::{fold3, folded_potential, geodesic3, grad_folded, pair_field, random_smooth_pair, reflect3, MassDensity};
use neumann_sphere::radial::{extend_profile, solve_ball_mode};
use neumann_sphere::sphere::{fold, reflect, QuadratureRule, UnitVec};
use neumann_sphere::Tolerances;

pub type Outcome = Result<(), String>;

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Outcome
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn unit3() -> impl Strategy<Value = [f64; 3]> {
    [-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64].prop_filter("near zero", |v| norm(*v) > 0.1).prop_map(|v| {
        let n = norm(v);
        [v[0] / n, v[1] / n, v[2] / n]
    })
}

fn unit_n() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (2usize..=6).prop_flat_map(|n| {
        let v = || prop::collection::vec(-1.0..1.0f64, n + 1).prop_filter("near zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 0.01);
        (v(), v(), v())
    })
}

fn tangent_basis(z: [f64; 3]) -> [[f64; 3]; 2] {
    let e = if z[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = dot(e, z);
    let u = [e[0] - d * z[0], e[1] - d * z[1], e[2] - d * z[2]];
    let n = norm(u);
    let e1 = [u[0] / n, u[1] / n, u[2] / n];
    [e1, [z[1] * e1[2] - z[2] * e1[1], z[2] * e1[0] - z[0] * e1[2], z[0] * e1[1] - z[1] * e1[0]]]
}

/// R_a is an involution and an isometry, on S^n for several n and in the
/// three-dimensional fast path.
pub fn reflection_is_an_involutive_isometry(cases: u32) -> Outcome {
    run(cases, (unit_n(), unit3(), unit3(), unit3()), |((a, z, w), a3, z3, w3)| {
        let (a, z, w) = (UnitVec::new(a).unwrap(), UnitVec::new(z).unwrap(), UnitVec::new(w).unwrap());
        let back = reflect(&a, &reflect(&a, &z));
        prop_assert!(back.distance(&z) <= 1e-14, "R_a R_a z = {back:?}");
        let dz = reflect(&a, &z).dot(&reflect(&a, &w)) - z.dot(&w);
        prop_assert!(dz.abs() <= 1e-14);
        prop_assert!(norm(sub(reflect3(a3, reflect3(a3, z3)), z3)) <= 1e-14);
        prop_assert!((dot(reflect3(a3, z3), reflect3(a3, w3)) - dot(z3, w3)).abs() <= 1e-14);
        Ok(())
    })
}

/// F_a F_a = F_a, and the image lies in the closed hemisphere a.v <= 0.
pub fn fold_is_idempotent(cases: u32) -> Outcome {
    run(cases, (unit_n(), unit3(), unit3()), |((a, z, _), a3, z3)| {
        let (a, z) = (UnitVec::new(a).unwrap(), UnitVec::new(z).unwrap());
        let once = fold(&a, &z);
        let twice = fold(&a, &once);
        prop_assert!(once.distance(&twice) == 0.0);
        prop_assert!(a.dot(&once) <= 1e-15);
        let f = fold3(a3, z3);
        prop_assert_eq!(fold3(a3, f), f);
        prop_assert!(dot(a3, f) <= 1e-15);
        Ok(())
    })
}

/// Tangential folded gradient agrees with central differences of the folded
/// potential to 1e-6 of its scale.
pub fn gradient_matches_finite_differences(cases: u32) -> Outcome {
    run(cases, (unit3(), 0.3..1.5f64, unit3(), unit3(), 0.4..1.5f64), |(c, r, a, z, rw)| {
        let rho = MassDensity::cap_indicator(c, r, 16, 32).unwrap();
        let wt = extend_profile(solve_ball_mode(2, rw).unwrap()).unwrap();
        let grad = grad_folded(&rho, a, z, &wt);
        prop_assert!(dot(grad, z).abs() <= 1e-12 * rho.mass());
        let h = 1e-5;
        for e in tangent_basis(z) {
            let step = |s: f64| {
                let p = [0, 1, 2].map(|k| s.cos() * z[k] + s.sin() * e[k]);
                let n = norm(p);
                p.map(|x| x / n)
            };
            let fd = (folded_potential(&rho, a, step(h), &wt) - folded_potential(&rho, a, step(-h), &wt)) / (2.0 * h);
            let scale = norm(grad).max(1e-3 * rho.mass());
            prop_assert!((fd - dot(grad, e)).abs() <= 1e-6 * scale, "fd {fd} vs {}", dot(grad, e));
        }
        Ok(())
    })
}

/// Swap equivariance: V(w, z) = (R_a V_1(z, w), R_a V_2(z, w)), i.e.
/// dS V(w, z) = Q V(z, w) once dS exchanges the factors.
pub fn pair_field_is_swap_symmetric(cases: u32) -> Outcome {
    let rule = QuadratureRule::product_gauss(&UnitVec::north(2), 12, 24);
    let wt = extend_profile(solve_ball_mode(2, 0.8).unwrap()).unwrap();
    run(cases, (0u64..10_000, unit3(), unit3()), |(seed, z, w)| {
        prop_assume!(geodesic3(z, w) > 0.05);
        let (rho, sigma) = random_smooth_pair(seed, 3, &rule).unwrap();
        let f = pair_field(&rho, &sigma, z, w, &wt, 0.05).unwrap();
        let s = pair_field(&rho, &sigma, w, z, &wt, 0.05).unwrap();
        prop_assert!(norm(sub(s.first, reflect3(f.a, f.first))) <= 1e-10);
        prop_assert!(norm(sub(s.second, reflect3(f.a, f.second))) <= 1e-10);
        prop_assert_eq!(s.a, f.a.map(|x| -x));
        Ok(())
    })
}

/// The FEM spectrum of two well-separated caps is the merged spectrum of
/// each cap on the same mesh.
pub fn disjoint_union_spectrum_merges(cases: u32) -> Outcome {
    let level = 3;
    let mesh = build_icosphere(level).unwrap();
    let opts = SolverOptions::default();
    let k = 5;
    run(cases, (unit3(), unit3(), 0.5..1.0f64, 0.5..1.0f64), |(c1, c2, r1, r2)| {
        prop_assume!(geodesic3(c1, c2) > r1 + r2 + 0.5);
        let caps = [CapSpec::new(c1, r1).unwrap(), CapSpec::new(c2, r2).unwrap()];
        let solve = |spec: DomainSpec| solve_on_mesh(&mesh, Some(&domain_mask(&mesh, &spec).unwrap()), None, k, &opts).unwrap().eigenvalues;
        let union = solve(DomainSpec::union_of(caps.to_vec()));
        let mut merged: Vec<f64> = [solve(DomainSpec::union_of(vec![caps[0]])), solve(DomainSpec::union_of(vec![caps[1]]))].concat();
        merged.sort_by(f64::total_cmp);
        for (u, m) in union.iter().zip(&merged) {
            prop_assert!((u - m).abs() <= 1e-7 * m.abs().max(1.0), "{union:?} vs {merged:?}");
        }
        Ok(())
    })
}

/// Every solved ball mode has J^2 nondecreasing and b nonincreasing, and
/// passes its residual checks.
pub fn ball_modes_are_monotone(cases: u32) -> Outcome {
    let tol = Tolerances::default();
    run(cases, (2usize..=4, 0.2..std::f64::consts::FRAC_PI_2), |(n, r)| {
        let mode = solve_ball_mode(n, r).unwrap();
        mode.validate(&tol).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let p = extend_profile(mode).unwrap();
        p.check_monotonicity(tol.monotonicity_slack).map_err(|e| TestCaseError::fail(format!("n = {n}, r = {r}: {e}")))?;
        Ok(())
    })
}
