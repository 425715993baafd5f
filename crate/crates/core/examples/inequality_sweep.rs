//! A short randomized sweep of mu_2(Omega) <= mu_1(B^{|Omega|/2}) and of the
//! complement bound mu_1(Omega) <= mu_1(B^m).
use neumann_sphere::verify::{cmd_verify_cor13, cmd_verify_thm12, ExperimentConfig};

fn main() -> neumann_sphere::Result<()> {
    let cfg = ExperimentConfig { level: 4, trials: 5, seed: 11, ..Default::default() };
    for rep in [cmd_verify_thm12(&cfg)?, cmd_verify_cor13(&cfg)?] {
        for r in &rep.records {
            println!("{}", r.summary());
        }
        println!("{}: passed = {}", rep.command, rep.passed);
    }
    Ok(())
}
