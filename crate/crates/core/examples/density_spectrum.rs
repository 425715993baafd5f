//! Spectrum of the shipped density rho_pl and of a ball on S^3.
use neumann_sphere::radial::{ball_spectrum, solve_radial_density, RadialDensity};

fn main() -> neumann_sphere::Result<()> {
    let rho = RadialDensity::rho_pl();
    let s = solve_radial_density(2, &rho, 6, 8)?;
    println!("mass(rho_pl) = {:.6}", rho.mass(2));
    for e in &s.entries {
        println!("mu = {:.6}  degree {}  residual {:.1e}", e.mu, e.degree, e.residual);
    }
    println!("B^5 on S^3: {:?}", ball_spectrum(3, 5.0, 4)?);
    Ok(())
}
