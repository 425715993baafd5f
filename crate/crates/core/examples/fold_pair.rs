//! Common critical pair of the folded potentials of a cap indicator and a
//! signed density.
use neumann_sphere::foldmap::{find_fold_pair, FoldOptions, MassDensity, Provenance};
use neumann_sphere::radial::{extend_profile, solve_ball_mode};

fn main() -> neumann_sphere::Result<()> {
    let rho = MassDensity::cap_indicator([0.0, 0.6, 0.8], 1.0, 24, 48)?;
    let sigma = rho.weighted(Provenance::Explicit, |v| v[0] + 0.3 * v[1])?;
    let weight = extend_profile(solve_ball_mode(2, 0.7)?)?;
    let pair = find_fold_pair(&rho, &sigma, &weight, &FoldOptions::default())?;
    println!("{}", serde_json::to_string_pretty(&pair)?);
    Ok(())
}
