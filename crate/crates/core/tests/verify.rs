use neumann_sphere::fem::DomainSpec;
use neumann_sphere::verify::*;

fn cfg(level: usize, trials: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig { level, trials, seed, ..Default::default() }
}

#[test]
fn sweeps_are_reproducible_from_the_seed() {
    let a = cmd_verify_thm12(&cfg(3, 4, 17)).unwrap();
    let b = cmd_verify_thm12(&cfg(3, 4, 17)).unwrap();
    let ja = serde_json::to_string(&a.records).unwrap();
    assert_eq!(ja, serde_json::to_string(&b.records).unwrap());
    let c = cmd_verify_thm12(&cfg(3, 4, 18)).unwrap();
    assert_ne!(ja, serde_json::to_string(&c.records).unwrap());
}

#[test]
fn records_carry_distinct_oracles() {
    for rep in [cmd_verify_thm12(&cfg(3, 3, 1)).unwrap(), cmd_verify_cor13(&cfg(3, 3, 1)).unwrap()] {
        for r in &rep.records {
            assert_eq!((r.value_oracle, r.bound_oracle), (Oracle::Fem, Oracle::Radial));
        }
    }
}

#[test]
fn single_cap_is_a_strict_pass_and_three_components_trivial() {
    let one = DomainSpec::cap([0.0, 0.0, 1.0], 1.0).unwrap();
    let rep = cmd_fem_eig(&cfg(4, 1, 0), &one, 2).unwrap();
    assert!(rep.passed);
    let fem: Vec<f64> = serde_json::from_value(rep.data.unwrap()).unwrap();
    let bound = neumann_sphere::radial::solve_ball_mode(2, neumann_sphere::sphere::radius_from_area(union_area(&one).unwrap() / 2.0, 2).unwrap()).unwrap().mu;
    assert!(fem[2] / bound < 1.0);
}

#[test]
fn q2_curve_is_flagged_non_monotone() {
    let rep = cmd_explore_q2(&cfg(3, 1, 0), 11).unwrap();
    assert!(rep.records.is_empty() && rep.passed);
    let rows: Vec<Q2Row> = serde_json::from_value(rep.data.unwrap()).unwrap();
    assert!(rows.iter().any(|r| r.increasing));
    // m = 2 pi is the hemisphere.
    let mid = &rows[5];
    assert!((mid.area - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!((mid.mu_radial - 2.0).abs() < 1e-6 && (mid.mu_shooting.unwrap() - 2.0).abs() < 1e-6);
}

#[test]
fn invalid_configurations_are_rejected() {
    assert!(ExperimentConfig { level: 0, ..Default::default() }.validate().is_err());
    assert!(ExperimentConfig { n: 1, ..Default::default() }.validate().is_err());
    assert!(ExperimentConfig { resolution: 2, ..Default::default() }.validate().is_err());
    assert!(ExperimentConfig::default().validate().is_ok());
}
