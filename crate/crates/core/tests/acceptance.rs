//! The acceptance run: one line per criterion with its verdict and runtime.
//! Runs as a plain binary so the lines always reach the test log.

mod props;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::FRAC_PI_2;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use neumann_sphere::fem::{build_icosphere, domain_mask, neumann_eigs, solve_on_mesh, DomainSpec, SolverOptions};
use neumann_sphere::foldmap::{
    find_fold_pair, random_smooth_pair, select_basis, zero_census, CensusOptions, FoldCritPair, FoldOptions, FoldWeight, MassDensity, PolynomialWeight,
    Provenance, TestFunction,
};
use neumann_sphere::radial::{extend_profile, solve_ball_mode, ExtendedProfile};
use neumann_sphere::sphere::{radius_from_area, QuadratureRule, UnitVec};
use neumann_sphere::verify::{
    cmd_fold_demo, cmd_reproduce_counterexample, cmd_verify_cor13, cmd_verify_harmonic, cmd_verify_thm12, random_domain, ExperimentConfig, Report,
};

type Check = Result<String, String>;

fn criterion(id: usize, name: &str, limit: Duration, f: impl FnOnce() -> Check) -> bool {
    let t = Instant::now();
    let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panic: {}", msg.unwrap_or_default()))
    });
    let secs = t.elapsed().as_secs_f64();
    let out = match out {
        Ok(d) if t.elapsed() > limit => Err(format!("{d}; exceeded the {} s limit", limit.as_secs())),
        o => o,
    };
    let (tag, detail) = match &out {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("criterion {id:>2} {tag} {name} [{secs:.1} s]: {detail}");
    out.is_ok()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: neumann_sphere::Error) -> String {
    err.to_string()
}

fn report_check(rep: &Report) -> Check {
    let failed: Vec<String> = rep.records.iter().filter(|r| !r.passed()).map(|r| r.summary()).collect();
    ensure(rep.passed && failed.is_empty(), || failed.join("; "))?;
    let ratios: Vec<f64> = rep.records.iter().filter_map(|r| r.extra.get("ratio").copied()).collect();
    if ratios.is_empty() {
        return Ok(format!("{} records pass", rep.records.len()));
    }
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    Ok(format!("{} records pass, largest value/bound {worst:.4}", rep.records.len()))
}

fn profile(r: f64) -> ExtendedProfile {
    extend_profile(solve_ball_mode(2, r).unwrap()).unwrap()
}

fn max_g(w: &dyn FoldWeight) -> f64 {
    (0..=2000).map(|i| w.g(-1.0 + i as f64 / 1000.0).abs()).fold(0.0, f64::max)
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|x| x / n)
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).powi(2)).sum::<f64>().sqrt()
}

fn tangent_basis(z: [f64; 3]) -> [[f64; 3]; 2] {
    let e = if z[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = e[0] * z[0] + e[1] * z[1] + e[2] * z[2];
    let e1 = unit([e[0] - d * z[0], e[1] - d * z[1], e[2] - d * z[2]]);
    [e1, [z[1] * e1[2] - z[2] * e1[1], z[2] * e1[0] - z[0] * e1[2], z[0] * e1[1] - z[1] * e1[0]]]
}

struct FoldInstance {
    label: String,
    rho: MassDensity,
    sigma: MassDensity,
    u2: Option<MassDensity>,
    weight: ExtendedProfile,
    pair: Result<FoldCritPair, String>,
}

fn random_center(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n: f64 = dist(v, [0.0; 3]);
        if n > 0.1 && n <= 1.0 {
            return unit(v);
        }
    }
}

/// Ten cap-indicator pairs and ten mesh domains with sigma = u_1 rho.
fn fold_instances() -> Vec<FoldInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut caps = Vec::new();
    for i in 0..10 {
        let (c1, r1) = (random_center(&mut rng), rng.gen_range(0.3..1.4));
        let (c2, r2) = (random_center(&mut rng), rng.gen_range(0.3..1.4));
        caps.push((format!("caps #{i}"), c1, r1, c2, r2));
    }
    let domains: Vec<DomainSpec> = (0..10).map(|_| random_domain(&mut rng).unwrap().0).collect();
    let opts = FoldOptions::default();
    let mut out: Vec<FoldInstance> = caps
        .into_par_iter()
        .map(|(label, c1, r1, c2, r2)| {
            let rho = MassDensity::cap_indicator(c1, r1, 24, 48).unwrap();
            let sigma = MassDensity::cap_indicator(c2, r2, 24, 48).unwrap();
            let weight = profile(radius_from_area(rho.mass() / 2.0, 2).unwrap());
            let pair = find_fold_pair(&rho, &sigma, &weight, &opts).map_err(e);
            FoldInstance { label, rho, sigma, u2: None, weight, pair }
        })
        .collect();
    let mesh = build_icosphere(4).unwrap();
    out.par_extend(domains.into_par_iter().enumerate().map(|(i, spec)| {
        let mask = domain_mask(&mesh, &spec).unwrap();
        let s = solve_on_mesh(&mesh, Some(&mask), None, 2, &SolverOptions::default()).unwrap();
        let rho = MassDensity::from_mesh(&mesh, &mask, None, Provenance::MeshIndicator).unwrap();
        let w = |k: usize| MassDensity::from_mesh(&mesh, &mask, Some(&s.eigenvectors[k]), Provenance::MeshEigenfunctionWeighted).unwrap();
        let weight = profile(radius_from_area(mask.discrete_area / 2.0, 2).unwrap());
        let sigma = w(1);
        let pair = find_fold_pair(&rho, &sigma, &weight, &opts).map_err(e);
        FoldInstance { label: format!("mesh #{i} ({} caps)", spec.union.len()), rho, sigma, u2: Some(w(2)), weight, pair }
    }));
    out
}

fn c1_hemisphere() -> Check {
    let mut worst = 0.0f64;
    for n in [2, 3, 4] {
        let t = Instant::now();
        let mu = solve_ball_mode(n, FRAC_PI_2).map_err(e)?.mu;
        ensure((mu - n as f64).abs() <= 1e-6, || format!("n = {n}: mu = {mu}"))?;
        ensure(t.elapsed() < Duration::from_secs(1), || format!("n = {n} took {:?}", t.elapsed()))?;
        worst = worst.max((mu - n as f64).abs());
    }
    Ok(format!("max |mu - n| = {worst:.2e}"))
}

fn c2_ball6() -> Check {
    let mu = solve_ball_mode(2, radius_from_area(6.0, 2).map_err(e)?).map_err(e)?.mu;
    ensure((mu - 2.071487).abs() <= 1e-3, || format!("mu_1(B^6) = {mu}"))?;
    Ok(format!("mu_1(B^6) = {mu:.7}"))
}

fn c3_counterexample() -> Check {
    let rep = cmd_reproduce_counterexample(&ExperimentConfig::default(), false).map_err(e)?;
    report_check(&rep)?;
    let get = |c: &str| rep.records.iter().find(|r| r.check == c).map(|r| r.value).unwrap();
    let gap = rep.records.iter().find(|r| r.check == "strict-gap").unwrap();
    ensure(gap.extra["mu1_density"] > gap.extra["mu1_ball"], || "no strict inequality".into())?;
    Ok(format!("mass {:.6}, mu_1(rho_pl) {:.6}, mu_1(B^6) {:.6}, gap {:.4}", get("mass"), get("mu1-density"), get("mu1-ball"), get("strict-gap")))
}

fn c4_fem_vs_shooting() -> Check {
    let rep = neumann_eigs(&DomainSpec::cap([0.0, 0.0, 1.0], 1.0).map_err(e)?, 5, 2).map_err(e)?;
    let shoot = solve_ball_mode(2, 1.0).map_err(e)?.mu;
    let rel = (rep.mu(1) / shoot - 1.0).abs();
    ensure(rel <= 0.01, || format!("FEM {} vs shooting {shoot}", rep.mu(1)))?;
    Ok(format!("FEM {:.6} vs shooting {shoot:.6}, relative {rel:.2e}", rep.mu(1)))
}

fn c5_mu2_bound() -> Check {
    let cfg = ExperimentConfig { trials: 25, level: 5, seed: 0, ..Default::default() };
    let rep = cmd_verify_thm12(&cfg).map_err(e)?;
    let eq = &rep.records[0];
    ensure(eq.check == "thm12-equality" && eq.passed(), || eq.summary())?;
    ensure(rep.records.iter().filter(|r| r.trial.is_some()).count() == 25, || "missing trials".into())?;
    let s = report_check(&rep)?;
    Ok(format!("{s}; equality case {:.5} vs {:.5}", eq.value, eq.bound))
}

fn c6_complement_bound() -> Check {
    let cfg = ExperimentConfig { trials: 15, level: 5, seed: 0, ..Default::default() };
    let rep = cmd_verify_cor13(&cfg).map_err(e)?;
    ensure(rep.records.iter().filter(|r| r.trial.is_some()).count() == 15, || "missing trials".into())?;
    report_check(&rep)
}

fn c7_harmonic() -> Check {
    let cfg = ExperimentConfig { n: 3, trials: 10, seed: 0, ..Default::default() };
    let rep = cmd_verify_harmonic(&cfg).map_err(e)?;
    let u = &rep.records[0];
    ensure(u.check == "harmonic-uniform" && (u.value - 2.0 / 3.0).abs() <= 1e-6 && (u.bound - 2.0 / 3.0).abs() <= 1e-6, || u.summary())?;
    let s = report_check(&rep)?;
    let slack = rep.records[1..].iter().map(|r| r.value - r.bound).fold(f64::INFINITY, f64::min);
    Ok(format!("{s}; uniform {:.9}; smallest slack {slack:.4}", u.value))
}

fn c8_pairs(inst: &[FoldInstance]) -> Check {
    let p = unit([0.3, -0.2, 0.9]);
    let q = p.map(|x| -x);
    let rho = MassDensity::cap_indicator(p, 0.5, 24, 48).map_err(e)?;
    let sigma = MassDensity::cap_indicator(q, 0.5, 24, 48).map_err(e)?;
    let ball = find_fold_pair(&rho, &sigma, &profile(0.5), &FoldOptions::default()).map_err(e)?;
    ensure(ball.residual() <= 1e-8 && dist(ball.z, p) <= 1e-6 && dist(ball.w, q) <= 1e-6, || format!("ball pair {ball:?}"))?;
    let mut worst = 0.0f64;
    for i in inst {
        let pair = i.pair.as_ref().map_err(|m| format!("{}: {m}", i.label))?;
        ensure(pair.residual() <= 1e-8, || format!("{}: residual {:.2e}", i.label, pair.residual()))?;
        worst = worst.max(pair.residual());
    }
    Ok(format!("{} instances, max residual {worst:.2e}; ball pair error {:.1e}", inst.len(), dist(ball.z, p).max(dist(ball.w, q))))
}

fn c9_orthogonality(inst: &[FoldInstance]) -> Check {
    let mut worst = 0.0f64;
    for i in inst {
        let pair = *i.pair.as_ref().map_err(|m| m.clone())?;
        let tol = 1e-6 * i.rho.mass() * max_g(&i.weight);
        for xi in tangent_basis(pair.z) {
            let phi = TestFunction::new(xi, pair, &i.weight).map_err(e)?;
            let (a, b) = (phi.integrate_against(&i.rho).abs(), phi.integrate_against(&i.sigma).abs());
            ensure(a <= tol && b <= tol, || format!("{}: residuals {a:.2e}, {b:.2e} above {tol:.2e}", i.label))?;
            worst = worst.max(a.max(b) / tol);
        }
        if let Some(u2) = &i.u2 {
            let basis = select_basis(u2, &pair, &i.weight, 1e-12 * i.rho.mass()).map_err(e)?;
            let phi = TestFunction::new(basis.xi[1], pair, &i.weight).map_err(e)?;
            let c = phi.integrate_against(u2).abs();
            ensure(c <= tol, || format!("{}: u_2 residual {c:.2e} above {tol:.2e}", i.label))?;
            worst = worst.max(c / tol);
        }
    }
    let demo = cmd_fold_demo(&ExperimentConfig::default(), &DomainSpec::cap(unit([0.3, 0.1, 0.8]), 1.1).map_err(e)?, false).map_err(e)?;
    report_check(&demo)?;
    Ok(format!("largest residual / tolerance {worst:.2e}; one-cap fold demo passes"))
}

fn c10_census() -> Check {
    let opts = CensusOptions::default();
    let p = MassDensity::cap_indicator([0.0, 0.0, 1.0], 0.5, 16, 32).map_err(e)?;
    let q = MassDensity::cap_indicator([0.0, 0.0, -1.0], 0.5, 16, 32).map_err(e)?;
    let ball = zero_census(&p, &q, &profile(0.5), &opts).map_err(e)?;
    ensure(ball.count() == 2 && !ball.degenerate, || format!("ball pair: {} zeros, degenerate {}", ball.count(), ball.degenerate))?;
    let rule = QuadratureRule::product_gauss(&UnitVec::north(2), 16, 32);
    let mut counts = Vec::new();
    let mut flagged = Vec::new();
    let mut seed = 1;
    while counts.len() < 10 && seed <= 40 {
        let (rho, sigma) = random_smooth_pair(seed, 3, &rule).map_err(e)?;
        let c = zero_census(&rho, &sigma, &PolynomialWeight, &opts).map_err(e)?;
        if c.degenerate {
            flagged.push(seed);
        } else {
            ensure(c.count_is_two_mod_four(), || format!("seed {seed}: {} zeros", c.count()))?;
            counts.push((seed, c.count()));
        }
        seed += 1;
    }
    ensure(counts.len() == 10, || format!("only {} nondegenerate instances in 40 seeds", counts.len()))?;
    let list: Vec<String> = counts.iter().map(|(s, c)| format!("{s}:{c}")).collect();
    Ok(format!("ball pair 2 zeros; seed:count {}; flagged degenerate {flagged:?}", list.join(" ")))
}

fn c11_properties() -> Check {
    let suites: [(&str, fn(u32) -> props::Outcome, u32); 6] = [
        ("R_a involution/isometry", props::reflection_is_an_involutive_isometry, 256),
        ("fold idempotence", props::fold_is_idempotent, 256),
        ("gradient vs finite differences", props::gradient_matches_finite_differences, 48),
        ("swap symmetry", props::pair_field_is_swap_symmetric, 64),
        ("disjoint-union merge", props::disjoint_union_spectrum_merges, 8),
        ("J^2 and b monotonicity", props::ball_modes_are_monotone, 24),
    ];
    for (name, f, cases) in suites {
        f(cases).map_err(|m| format!("{name}: {m}"))?;
    }
    Ok("6 property suites green".into())
}

fn main() {
    let min = |m: u64| Duration::from_secs(60 * m);
    let mut ok = Vec::new();
    ok.push(criterion(1, "hemisphere exactness", Duration::from_secs(3), c1_hemisphere));
    ok.push(criterion(2, "mu_1(B^6)", Duration::from_secs(1), c2_ball6));
    ok.push(criterion(3, "rho_pl counterexample", Duration::from_secs(10), c3_counterexample));
    ok.push(criterion(4, "FEM against shooting", min(1), c4_fem_vs_shooting));
    ok.push(criterion(5, "mu_2 bound sweep", min(20), c5_mu2_bound));
    ok.push(criterion(6, "complement bound sweep", min(15), c6_complement_bound));
    ok.push(criterion(7, "harmonic-mean bound on S^3", min(5), c7_harmonic));
    let t = Instant::now();
    let inst = fold_instances();
    let setup = t.elapsed();
    ok.push(criterion(8, "fold pairs", min(5).saturating_sub(setup), || c8_pairs(&inst).map(|s| format!("{s}; search {:.1} s", setup.as_secs_f64()))));
    ok.push(criterion(9, "test-function orthogonality", min(5), || c9_orthogonality(&inst)));
    ok.push(criterion(10, "zero census", min(10), c10_census));
    ok.push(criterion(11, "property suites", min(5), c11_properties));
    let passed = ok.iter().filter(|b| **b).count();
    println!("acceptance: {passed}/{} criteria pass", ok.len());
    if passed != ok.len() {
        std::process::exit(1);
    }
}
