//! Zero census of the paired field: the ball pair and a smooth random pair.
use neumann_sphere::foldmap::{random_smooth_pair, zero_census, CensusOptions, MassDensity, PolynomialWeight};
use neumann_sphere::sphere::{QuadratureRule, UnitVec};

fn main() -> neumann_sphere::Result<()> {
    let p = MassDensity::cap_indicator([0.0, 0.0, 1.0], 0.5, 16, 32)?;
    let q = MassDensity::cap_indicator([0.0, 0.0, -1.0], 0.5, 16, 32)?;
    let opts = CensusOptions { grid: 16, ..Default::default() };
    let c = zero_census(&p, &q, &PolynomialWeight, &opts)?;
    println!("ball pair: {} zeros in {} orbit(s)", c.count(), c.orbits);
    let rule = QuadratureRule::product_gauss(&UnitVec::north(2), 16, 32);
    let (rho, sigma) = random_smooth_pair(7, 3, &rule)?;
    let c = zero_census(&rho, &sigma, &PolynomialWeight, &opts)?;
    println!("smooth pair: {} zeros, 2 mod 4: {}, degenerate: {}", c.count(), c.count_is_two_mod_four(), c.degenerate);
    Ok(())
}
