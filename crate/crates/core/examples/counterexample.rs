//! The density rho_pl beats the ball of the same mass; writes the profile plot.
use neumann_sphere::verify::{cmd_reproduce_counterexample, ExperimentConfig};

fn main() -> neumann_sphere::Result<()> {
    let cfg = ExperimentConfig { out: Some(std::env::temp_dir().join("rho_pl")), ..Default::default() };
    let rep = cmd_reproduce_counterexample(&cfg, false)?;
    for r in &rep.records {
        println!("{}", r.summary());
    }
    println!("outputs: {:?}", rep.outputs);
    Ok(())
}
