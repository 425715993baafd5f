use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::domains::{random_complement_domain, random_domain, random_radial_density, union_area};
use super::svg::line_plot;
use super::{ExperimentConfig, Oracle, Relation, Report, Verdict, VerificationRecord};
use crate::error::{Error, Result};
use crate::fem::{
    assemble, build_icosphere, domain_mask, neumann_eigs_density, neumann_eigs_with, solve_on_mesh, CapSpec, DomainSpec, FemReport, SolverOptions, MAX_LEVEL,
};
use crate::foldmap::{
    find_fold_pair, rayleigh_of_family, rayleigh_of_test, select_basis, zero_census, Census, FoldCritPair, FoldWeight, MassDensity, Provenance,
    SelectedBasis, TestFunction,
};
use crate::radial::{ball_spectrum, extend_profile, solve_ball_mode, solve_ball_mode_with, ExtendedProfile, RadialDensity};
use crate::sphere::{cap_area, radius_from_area, sphere_area};

fn profile(r: f64) -> Result<ExtendedProfile> {
    extend_profile(solve_ball_mode(2, r)?)
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn fem_bytes(rep: &FemReport) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    rep.write_csv(&mut buf)?;
    Ok(buf)
}

#[derive(Debug, Clone, Serialize)]
pub struct BallEigReport {
    pub n: usize,
    pub radius: f64,
    pub area: f64,
    pub mu: f64,
    pub ode_residual: f64,
}

/// First non-constant Neumann eigenvalue of a geodesic ball given by its
/// radius or its measure.
pub fn cmd_ball_eig(cfg: &ExperimentConfig, radius: Option<f64>, area: Option<f64>) -> Result<Report> {
    let n = cfg.n;
    let r = match (radius, area) {
        (Some(r), None) => r,
        (None, Some(a)) => radius_from_area(a, n)?,
        _ => return Err(Error::Domain("give exactly one of radius and area".into())),
    };
    let mode = solve_ball_mode_with(n, r, &cfg.tol)?;
    mode.validate(&cfg.tol)?;
    let out = BallEigReport { n, radius: r, area: cap_area(r, n)?, mu: mode.mu, ode_residual: mode.ode_residual };
    let mut rep = Report::new("ball-eig", cfg);
    rep.note(format!("mu_1(B) = {:.9} for n = {n}, r = {r:.9}, |B| = {:.9}", out.mu, out.area));
    let row = vec![n.to_string(), format!("{r:.12}"), format!("{:.12}", out.area), format!("{:.12}", out.mu), format!("{:.3e}", out.ode_residual)];
    let bytes = csv_bytes(&["n", "radius", "area", "mu", "ode_residual"], [row])?;
    rep.write_file("ball_eig.csv", &bytes)?;
    let profile_rows = mode.theta_grid.iter().zip(&mode.j_values).zip(&mode.j_prime_values).map(|((t, j), jp)| vec![format!("{t:.12}"), format!("{j:.12}"), format!("{jp:.12}")]);
    let bytes = csv_bytes(&["theta", "j", "j_prime"], profile_rows)?;
    rep.write_file("ball_profile.csv", &bytes)?;
    rep.data = Some(serde_json::to_value(&out)?);
    rep.write_standard("ball_eig")?;
    Ok(rep)
}

/// Spectrum of a radial density; with `fem_check` (n = 2) the low
/// eigenvalues are compared against the weighted FEM solver.
pub fn cmd_density_eig(cfg: &ExperimentConfig, rho: &RadialDensity, k: usize, degree_max: usize, fem_check: bool) -> Result<Report> {
    let spec = crate::radial::solve_radial_density(cfg.n, rho, k, degree_max)?;
    let mut rep = Report::new("density-eig", cfg);
    rep.note(format!("mass = {:.9}", rho.mass(cfg.n)));
    if spec.truncation_warning {
        rep.note(format!("mu_{k} is close to the lowest eigenvalue of degree {degree_max}; raise the degree cutoff"));
    }
    let mut buf = Vec::new();
    spec.write_csv(&mut buf)?;
    rep.write_file("density_eig.csv", &buf)?;
    if fem_check && cfg.n == 2 {
        let floor = rho.floor();
        let fem = neumann_eigs_density(|v| rho.eval(v[2].clamp(-1.0, 1.0).acos()), floor, cfg.level, k)?;
        for i in 1..=k {
            let v = fem.mu(i);
            rep.push(
                VerificationRecord::new("density-cross-oracle", format!("mu_{i}"), (v, Oracle::Fem), (spec.mu(i), Oracle::Radial), 0.01 * spec.mu(i), Relation::Within)
                    .at_level(cfg.level),
            );
        }
        rep.write_file("density_fem.csv", &fem_bytes(&fem)?)?;
    }
    rep.data = Some(serde_json::to_value(&spec.entries)?);
    rep.write_standard("density_eig")?;
    Ok(rep)
}

/// FEM spectrum of a cap-union domain. A single cap is also checked against
/// the shooting solver.
pub fn cmd_fem_eig(cfg: &ExperimentConfig, spec: &DomainSpec, k: usize) -> Result<Report> {
    let fem = neumann_eigs_with(spec, cfg.level, k.max(1), &cfg.solver_options())?;
    let mut rep = Report::new("fem-eig", cfg);
    rep.note(format!("discrete area {:.9}, components {}", fem.fine.mass, fem.fine.components));
    if let ([cap], false) = (spec.union.as_slice(), spec.complement) {
        let shoot = solve_ball_mode_with(2, cap.radius, &cfg.tol)?.mu;
        rep.push(
            VerificationRecord::new("fem-vs-shooting", format!("cap r = {}", cap.radius), (fem.mu(1), Oracle::Fem), (shoot, Oracle::Radial), 0.01 * shoot, Relation::Within)
                .at_level(cfg.level)
                .with("mu_fine", fem.fine.mu(1))
                .with("mu_coarse", fem.coarse.mu(1)),
        );
    }
    rep.write_file("fem_eig.csv", &fem_bytes(&fem)?)?;
    rep.data = Some(serde_json::to_value(&fem.extrapolated)?);
    rep.write_standard("fem_eig")?;
    Ok(rep)
}

pub const RHO_PL_MASS: f64 = 6.0;
pub const RHO_PL_MU1: f64 = 2.213185;
pub const BALL6_MU1: f64 = 2.071487;

/// The density rho_pl: its mass, mu_1, the ball value and the strict gap, and
/// a plot of the profile against the polar angle.
pub fn cmd_reproduce_counterexample(cfg: &ExperimentConfig, fem_check: bool) -> Result<Report> {
    let rho = RadialDensity::rho_pl();
    let mass = rho.mass(2);
    let spec = crate::radial::solve_radial_density(2, &rho, 3, 8)?;
    let mu1 = spec.mu1();
    let ball6 = solve_ball_mode_with(2, radius_from_area(RHO_PL_MASS, 2)?, &cfg.tol)?.mu;
    let ball_m = solve_ball_mode_with(2, radius_from_area(mass, 2)?, &cfg.tol)?.mu;

    let mut rep = Report::new("reproduce-counterexample", cfg);
    rep.push(VerificationRecord::new("mass", "int rho_pl", (mass, Oracle::Quadrature), (RHO_PL_MASS, Oracle::Reference), 1e-3, Relation::Within));
    rep.push(VerificationRecord::new("mu1-density", "mu_1(rho_pl)", (mu1, Oracle::Radial), (RHO_PL_MU1, Oracle::Reference), 2e-3, Relation::Within));
    rep.push(VerificationRecord::new("mu1-ball", "mu_1(B^6)", (ball6, Oracle::Radial), (BALL6_MU1, Oracle::Reference), 1e-3, Relation::Within));
    rep.push(
        VerificationRecord::new("strict-gap", "mu_1(rho_pl) - mu_1(B^mass)", (mu1 - ball_m, Oracle::Radial), (0.13, Oracle::Reference), 0.0, Relation::AtLeast)
            .with("mu1_density", mu1)
            .with("mu1_ball", ball_m),
    );
    if fem_check {
        let fem = neumann_eigs_density(|v| rho.eval(v[2].clamp(-1.0, 1.0).acos()), rho.floor(), cfg.level, 1)?;
        rep.push(
            VerificationRecord::new("mu1-cross-oracle", "mu_1(rho_pl) by FEM", (fem.mu(1), Oracle::Fem), (mu1, Oracle::Radial), 0.01 * mu1, Relation::Within)
                .at_level(cfg.level),
        );
    }

    let pts: Vec<(f64, f64)> = (0..=800).map(|i| PI * i as f64 / 800.0).map(|t| (t, rho.eval(t))).collect();
    rep.write_file("rho_pl.svg", line_plot("rho_pl against the polar angle", "theta", "rho", &pts).as_bytes())?;
    let rows = pts.iter().map(|(t, r)| vec![format!("{t:.12}"), format!("{r:.12}")]);
    rep.write_file("rho_pl_profile.csv", &csv_bytes(&["theta", "rho"], rows)?)?;
    let mut buf = Vec::new();
    spec.write_csv(&mut buf)?;
    rep.write_file("rho_pl_spectrum.csv", &buf)?;
    rep.write_standard("counterexample")?;
    Ok(rep)
}

/// mu_2 of a domain against mu_1(B^{area/2}). A borderline verdict is
/// recomputed one level finer.
fn thm12_record(spec: &DomainSpec, area: f64, level: usize, opts: &SolverOptions, desc: String) -> Result<VerificationRecord> {
    let bound = solve_ball_mode(2, radius_from_area(area / 2.0, 2)?)?.mu;
    let fem = neumann_eigs_with(spec, level, 2, opts)?;
    let rec = VerificationRecord::new("thm12", desc.clone(), (fem.fine.mu(2), Oracle::Fem), (bound, Oracle::Radial), fem.margin[2], Relation::AtMost)
        .at_level(level)
        .with("area", area)
        .with("ratio", fem.fine.mu(2) / bound)
        .with("components", fem.fine.components as f64);
    if rec.verdict == Verdict::InconclusiveRefine && level < MAX_LEVEL {
        return thm12_record(spec, area, level + 1, opts, desc);
    }
    Ok(rec)
}

fn two_antipodal_caps(r: f64) -> Result<DomainSpec> {
    Ok(DomainSpec::union_of(vec![CapSpec::new([0.0, 0.0, 1.0], r)?, CapSpec::new([0.0, 0.0, -1.0], r)?]))
}

/// mu_2(Omega) <= mu_1(B^{|Omega|/2}) over the equality case and `trials`
/// random cap unions.
pub fn cmd_verify_thm12(cfg: &ExperimentConfig) -> Result<Report> {
    let opts = cfg.solver_options();
    let mut rep = Report::new("verify-thm12", cfg);

    let r_eq = 0.9;
    let eq = two_antipodal_caps(r_eq)?;
    let fem = neumann_eigs_with(&eq, cfg.level, 2, &opts)?;
    let bound = solve_ball_mode(2, r_eq)?.mu;
    rep.push(
        VerificationRecord::new("thm12-equality", format!("two antipodal caps r = {r_eq}"), (fem.fine.mu(2), Oracle::Fem), (bound, Oracle::Radial), 0.01 * bound, Relation::Within)
            .at_level(cfg.level)
            .with("margin_fem", fem.margin[2]),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let domains: Vec<(DomainSpec, f64)> = (0..cfg.trials).map(|_| random_domain(&mut rng)).collect::<Result<_>>()?;
    let records: Vec<VerificationRecord> = domains
        .par_iter()
        .enumerate()
        .map(|(i, (spec, area))| thm12_record(spec, *area, cfg.level, &opts, format!("{} cap(s), area {area:.4}", spec.union.len())).map(|r| r.trial(i)))
        .collect::<Result<_>>()?;
    for r in records {
        rep.push(r);
    }
    let pts: Vec<(f64, f64)> = rep.records.iter().filter_map(|r| r.trial.map(|t| (t as f64, r.value / r.bound))).collect();
    rep.write_file("thm12_ratio.svg", line_plot("mu_2 / mu_1(B^{|Omega|/2}) per trial", "trial", "ratio", &pts).as_bytes())?;
    let specs: Vec<&DomainSpec> = domains.iter().map(|d| &d.0).collect();
    rep.data = Some(serde_json::to_value(specs)?);
    rep.write_standard("thm12")?;
    Ok(rep)
}

fn cor13_record(spec: &DomainSpec, m: f64, rm: f64, level: usize, opts: &SolverOptions, desc: String) -> Result<VerificationRecord> {
    let bound = solve_ball_mode(2, rm)?.mu;
    let fem = neumann_eigs_with(spec, level, 1, opts)?;
    let rec = VerificationRecord::new("cor13", desc.clone(), (fem.fine.mu(1), Oracle::Fem), (bound, Oracle::Radial), fem.margin[1], Relation::AtMost)
        .at_level(level)
        .with("m", m)
        .with("ratio", fem.fine.mu(1) / bound);
    if rec.verdict == Verdict::InconclusiveRefine && level < MAX_LEVEL {
        return cor13_record(spec, m, rm, level + 1, opts, desc);
    }
    Ok(rec)
}

/// mu_1(Omega) <= mu_1(B^m) for domains of measure m avoiding B^m.
pub fn cmd_verify_cor13(cfg: &ExperimentConfig) -> Result<Report> {
    let opts = cfg.solver_options();
    let mut rep = Report::new("verify-cor13", cfg);

    let m_eq = 3.0;
    let rm = radius_from_area(m_eq, 2)?;
    let antipodal = DomainSpec::cap([0.0, 0.0, -1.0], rm)?;
    rep.push(cor13_record(&antipodal, m_eq, rm, cfg.level, &opts, format!("antipodal cap, m = {m_eq}"))?);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let cases: Vec<(DomainSpec, f64, f64)> = (0..cfg.trials)
        .map(|_| {
            let m = (rng.gen_range(1f64.ln()..5.5f64.ln())).exp();
            random_complement_domain(&mut rng, m).map(|(s, r)| (s, m, r))
        })
        .collect::<Result<_>>()?;
    let records: Vec<VerificationRecord> = cases
        .par_iter()
        .enumerate()
        .map(|(i, (spec, m, rm))| cor13_record(spec, *m, *rm, cfg.level, &opts, format!("{} cap(s), m = {m:.4}", spec.union.len())).map(|r| r.trial(i)))
        .collect::<Result<_>>()?;
    for r in records {
        rep.push(r);
    }
    let hemi = solve_ball_mode(2, radius_from_area(2.0 * PI - 1e-6, 2)?)?.mu;
    rep.note(format!("bound as m -> 2 pi: {hemi:.9}"));
    let specs: Vec<&DomainSpec> = cases.iter().map(|d| &d.0).collect();
    rep.data = Some(serde_json::to_value(specs)?);
    rep.write_standard("cor13")?;
    Ok(rep)
}

fn harmonic_record(rho: &RadialDensity, check: &str, desc: String) -> Result<VerificationRecord> {
    let n = 3;
    let spec = crate::radial::solve_radial_density(n, rho, 3, 8)?;
    let (m2, m3) = (spec.mu(2), spec.mu(3));
    let mass = rho.mass(n);
    let ball = solve_ball_mode(n, radius_from_area(mass / 2.0, n)?)?.mu;
    let (margin, relation) = if check == "harmonic-uniform" { (1e-6, Relation::Within) } else { (1e-4, Relation::AtLeast) };
    Ok(VerificationRecord::new(check, desc, (1.0 / m2 + 1.0 / m3, Oracle::Radial), (2.0 / ball, Oracle::Radial), margin, relation)
        .with("mu2", m2)
        .with("mu3", m3)
        .with("mass", mass))
}

/// 1/mu_2 + 1/mu_3 >= 2/mu_1(B^{mass/2}) for radial densities on S^3,
/// density solver against ball shooting.
pub fn cmd_verify_harmonic(cfg: &ExperimentConfig) -> Result<Report> {
    let mut rep = Report::new("verify-harmonic", cfg);
    rep.push(harmonic_record(&RadialDensity::uniform(), "harmonic-uniform", "rho = 1".into())?);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let densities: Vec<RadialDensity> = (0..cfg.trials).map(|_| random_radial_density(&mut rng, 1e-3)).collect::<Result<_>>()?;
    let records: Vec<VerificationRecord> = densities
        .par_iter()
        .enumerate()
        .map(|(i, rho)| harmonic_record(rho, "harmonic", format!("{} pieces", rho.breakpoints().len() - 1)).map(|r| r.trial(i)))
        .collect::<Result<_>>()?;
    for r in records {
        rep.push(r);
    }
    rep.data = Some(serde_json::to_value(&densities)?);
    rep.write_standard("harmonic")?;
    Ok(rep)
}

#[derive(Debug, Clone, Serialize)]
pub struct Orthogonality {
    pub xi: [f64; 3],
    pub against_rho: f64,
    pub against_u1: f64,
    pub against_u2: f64,
    pub quotient: f64,
}

/// Everything the fold construction produces on one mesh domain with
/// rho = 1_Omega and sigma = u_1 1_Omega.
#[derive(Debug, Clone, Serialize)]
pub struct FoldAnalysis {
    pub domain: DomainSpec,
    pub level: usize,
    pub area: f64,
    pub discrete_area: f64,
    pub mu: Vec<f64>,
    pub half_radius: f64,
    pub ball_mu: f64,
    pub g_max: f64,
    /// mass * max|g|, the scale of the orthogonality residuals.
    pub scale: f64,
    pub pair: FoldCritPair,
    pub basis: SelectedBasis,
    pub functions: Vec<Orthogonality>,
    pub family_quotient: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<Census>,
}

fn weight_max(w: &dyn FoldWeight) -> f64 {
    (0..=2000).map(|i| w.g(-1.0 + i as f64 / 1000.0).abs()).fold(0.0, f64::max)
}

pub fn fold_analysis(spec: &DomainSpec, cfg: &ExperimentConfig, census: bool) -> Result<FoldAnalysis> {
    let mesh = build_icosphere(cfg.level)?;
    let mask = domain_mask(&mesh, spec)?;
    let sol = solve_on_mesh(&mesh, Some(&mask), None, 2, &cfg.solver_options())?;
    let asm = assemble(&mesh, Some(&mask), None)?;
    let rho = MassDensity::from_mesh(&mesh, &mask, None, Provenance::MeshIndicator)?;
    let u1 = MassDensity::from_mesh(&mesh, &mask, Some(&sol.eigenvectors[1]), Provenance::MeshEigenfunctionWeighted)?;
    let u2 = MassDensity::from_mesh(&mesh, &mask, Some(&sol.eigenvectors[2]), Provenance::MeshEigenfunctionWeighted)?;
    let area = union_area(spec)?;
    let half_radius = radius_from_area(mask.discrete_area / 2.0, 2)?;
    let wt = profile(half_radius)?;
    let ball_mu = wt.mu();

    let pair = find_fold_pair(&rho, &u1, &wt, &cfg.fold_options())?;
    let g_max = weight_max(&wt);
    let scale = rho.mass() * g_max;
    let basis = select_basis(&u2, &pair, &wt, 1e-12 * scale)?;
    let phis: Vec<TestFunction> = basis.xi.iter().map(|xi| TestFunction::new(*xi, pair, &wt)).collect::<Result<_>>()?;
    let functions = phis
        .iter()
        .map(|phi| {
            Ok(Orthogonality {
                xi: phi.xi,
                against_rho: phi.integrate_against(&rho),
                against_u1: phi.integrate_against(&u1),
                against_u2: phi.integrate_against(&u2),
                quotient: rayleigh_of_test(phi, &mesh, &asm)?,
            })
        })
        .collect::<Result<_>>()?;
    let family_quotient = rayleigh_of_family(&phis, &mesh, &asm)?;
    let census = if census {
        let p = MassDensity::cap_indicator([0.0, 0.0, 1.0], 0.5, 16, 32)?;
        let q = MassDensity::cap_indicator([0.0, 0.0, -1.0], 0.5, 16, 32)?;
        Some(zero_census(&p, &q, &profile(0.5)?, &cfg.census_options())?)
    } else {
        None
    };
    Ok(FoldAnalysis {
        domain: spec.clone(),
        level: cfg.level,
        area,
        discrete_area: mask.discrete_area,
        mu: sol.eigenvalues,
        half_radius,
        ball_mu,
        g_max,
        scale,
        pair,
        basis,
        functions,
        family_quotient,
        census,
    })
}

/// Fold pair, selected basis, orthogonality residuals and the Rayleigh
/// sandwich mu_2 <= R <= mu_1(B^{|Omega|/2}) on one domain.
pub fn cmd_fold_demo(cfg: &ExperimentConfig, spec: &DomainSpec, census: bool) -> Result<Report> {
    let fa = fold_analysis(spec, cfg, census)?;
    let mut rep = Report::new("fold-demo", cfg);
    let tol = 1e-6 * fa.scale;
    rep.push(VerificationRecord::new("pair-residual", "max critical residual", (fa.pair.residual(), Oracle::Quadrature), (0.0, Oracle::Quadrature), cfg.tol.pair_residual, Relation::AtMost));
    for (i, f) in fa.functions.iter().enumerate() {
        let q = (0.0, Oracle::Quadrature);
        rep.push(VerificationRecord::new("orthogonality", format!("xi_{} against rho", i + 1), (f.against_rho.abs(), Oracle::Quadrature), q, tol, Relation::AtMost));
        rep.push(VerificationRecord::new("orthogonality", format!("xi_{} against u_1 rho", i + 1), (f.against_u1.abs(), Oracle::Quadrature), q, tol, Relation::AtMost));
    }
    if !fa.basis.degenerate {
        rep.push(VerificationRecord::new("orthogonality", "xi_2 against u_2 rho", (fa.functions[1].against_u2.abs(), Oracle::Quadrature), (0.0, Oracle::Quadrature), tol, Relation::AtMost));
    }
    rep.push(
        VerificationRecord::new("sandwich-upper", "family quotient against mu_1(B^{|Omega|/2})", (fa.family_quotient, Oracle::Fem), (fa.ball_mu, Oracle::Radial), 0.02 * fa.ball_mu, Relation::AtMost)
            .at_level(cfg.level),
    );
    rep.push(
        VerificationRecord::new("sandwich-lower", "family quotient against mu_2", (fa.family_quotient, Oracle::Quadrature), (fa.mu[2], Oracle::Fem), 0.02 * fa.mu[2], Relation::AtLeast)
            .at_level(cfg.level),
    );
    if let Some(c) = &fa.census {
        rep.push(VerificationRecord::new("census", "zeros of the ball-pair field", (c.count() as f64, Oracle::Quadrature), (2.0, Oracle::Reference), 0.0, Relation::Within));
    }
    rep.data = Some(serde_json::to_value(&fa)?);
    rep.write_standard("fold_demo")?;
    Ok(rep)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Q2Row {
    pub area: f64,
    pub radius: f64,
    /// Shooting value, only for r <= pi/2.
    pub mu_shooting: Option<f64>,
    pub mu_radial: f64,
    pub mu_fem: f64,
    pub fem_margin: f64,
    /// The FEM value rose from the previous row.
    pub increasing: bool,
}

/// mu_1 of the cap of measure m across (0, 4 pi). Observational only.
pub fn cmd_explore_q2(cfg: &ExperimentConfig, points: usize) -> Result<Report> {
    let total = sphere_area(2);
    let opts = cfg.solver_options();
    let areas: Vec<f64> = (1..=points).map(|i| total * i as f64 / (points + 1) as f64).collect();
    let mut rows: Vec<Q2Row> = areas
        .par_iter()
        .map(|&m| {
            let r = radius_from_area(m, 2)?;
            let mu_shooting = if r <= PI / 2.0 + 1e-12 { Some(solve_ball_mode(2, r)?.mu) } else { None };
            let mu_radial = ball_spectrum(2, m, 1)?[1];
            let fem = neumann_eigs_with(&DomainSpec::cap([0.0, 0.0, 1.0], r)?, cfg.level, 1, &opts)?;
            Ok(Q2Row { area: m, radius: r, mu_shooting, mu_radial, mu_fem: fem.mu(1), fem_margin: fem.margin[1], increasing: false })
        })
        .collect::<Result<_>>()?;
    for i in 1..rows.len() {
        rows[i].increasing = rows[i].mu_fem > rows[i - 1].mu_fem;
    }
    let mut rep = Report::new("explore-q2", cfg);
    if let Some(first) = rows.iter().find(|r| r.increasing) {
        rep.note(format!("mu_1(B^m) is not monotone: it rises again from m = {:.4}", first.area));
    }
    let fmt = |x: Option<f64>| x.map(|v| format!("{v:.12}")).unwrap_or_default();
    let csv_rows = rows.iter().map(|r| {
        vec![
            format!("{:.12}", r.area),
            format!("{:.12}", r.radius),
            fmt(r.mu_shooting),
            format!("{:.12}", r.mu_radial),
            format!("{:.12}", r.mu_fem),
            format!("{:.3e}", r.fem_margin),
            r.increasing.to_string(),
        ]
    });
    rep.write_file("q2.csv", &csv_bytes(&["area", "radius", "mu_shooting", "mu_radial", "mu_fem", "fem_margin", "increasing"], csv_rows)?)?;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.area, r.mu_fem)).collect();
    rep.write_file("q2.svg", line_plot("mu_1 of the cap of measure m", "m", "mu_1", &pts).as_bytes())?;
    rep.data = Some(serde_json::to_value(&rows)?);
    rep.write_standard("q2")?;
    Ok(rep)
}
