//! Fold test functions on a cap: orthogonality, basis selection and the
//! Rayleigh sandwich.
use neumann_sphere::fem::DomainSpec;
use neumann_sphere::verify::{fold_analysis, ExperimentConfig};

fn main() -> neumann_sphere::Result<()> {
    let spec = DomainSpec::cap([0.1, -0.4, 0.9], 1.3)?;
    let fa = fold_analysis(&spec, &ExperimentConfig::default(), false)?;
    println!("pair residual {:.2e}, scale {:.4}", fa.pair.residual(), fa.scale);
    for f in &fa.functions {
        println!("rho {:+.2e}  u1 {:+.2e}  u2 {:+.2e}  R = {:.5}", f.against_rho, f.against_u1, f.against_u2, f.quotient);
    }
    println!("mu_2 = {:.5} <= family {:.5} <= mu_1(B^(|Omega|/2)) = {:.5}", fa.mu[2], fa.family_quotient, fa.ball_mu);
    Ok(())
}
