//! 1/mu_2 + 1/mu_3 against 2/mu_1(B^{mass/2}) for radial densities on S^3.
use neumann_sphere::verify::{cmd_verify_harmonic, ExperimentConfig};

fn main() -> neumann_sphere::Result<()> {
    let rep = cmd_verify_harmonic(&ExperimentConfig { n: 3, trials: 5, seed: 3, ..Default::default() })?;
    for r in &rep.records {
        println!("{}", r.summary());
    }
    Ok(())
}
