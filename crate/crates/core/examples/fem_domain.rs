//! FEM spectrum of a two-cap union with the two-level convergence report.
use neumann_sphere::fem::{neumann_eigs, CapSpec, DomainSpec};

fn main() -> neumann_sphere::Result<()> {
    let spec = DomainSpec::union_of(vec![CapSpec::new([0.0, 0.0, 1.0], 0.9)?, CapSpec::new([0.6, 0.0, -0.8], 0.6)?]);
    let rep = neumann_eigs(&spec, 5, 4)?;
    println!("components: {}, discrete area {:.6}", rep.fine.components, rep.fine.mass);
    rep.write_csv(std::io::stdout())?;
    Ok(())
}
